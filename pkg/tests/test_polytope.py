import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from transition_lab.forms import DualHalfSpace, GeometryError, QuadraticForm
from transition_lab.gallery import make_family
from transition_lab.polytope import (
    Polytope, adjacency, cross_section, dihedral_angle, enumerate_vertices, flat_distance,
    gram_compare, gram_matrix, wall_distance, wall_distance_oracle,
)
from transition_lab.qsqrt2 import SQRT2

H2 = QuadraticForm.hyperbolic(2)


def brute_force_vertices(walls, tol=1e-9):
    """Projective vertices by solving every n-subset of walls; numpy only."""
    W = np.array([np.asarray(w.coeffs, dtype=float) for w in walls])
    W = W / np.abs(W).max(axis=1, keepdims=True)
    dim = W.shape[1]
    found = []
    for sub in itertools.combinations(range(len(W)), dim - 1):
        A = W[list(sub)]
        _, s, vt = np.linalg.svd(A)
        if s[-1] < 1e-9:
            continue
        x = vt[-1]
        for cand in (x, -x):
            if np.all(W @ cand <= tol):
                cand = cand / np.abs(cand).max()
                if not any(np.allclose(cand, f, atol=1e-7) for f in found):
                    found.append(cand)
    return found


def square(side):
    walls = [DualHalfSpace([-side, 1, 0], "r"), DualHalfSpace([-side, -1, 0], "l"),
             DualHalfSpace([-side, 0, 1], "t"), DualHalfSpace([-side, 0, -1], "b")]
    return Polytope(H2, walls, [1, 0, 0])


def test_interior_point_validated():
    with pytest.raises(GeometryError):
        Polytope(H2, [DualHalfSpace([1, 0, 0])], [1, 0, 0])


def test_square_vertices_and_angles():
    for side, kind in [(0.5, "finite"), (math.sqrt(2) / 2, "ideal"), (0.9, "hyperideal")]:
        V = enumerate_vertices(square(side))
        assert len(V) == 4
        assert all(v.kind == kind for v in V.vertices)
    P = square(0.5)
    assert len(adjacency(P)) == 4
    r = dihedral_angle(H2, P.wall("r"), P.wall("t"))
    # c = -s^2 / (1 - s^2) for a Klein square of half side s
    assert r.kind == "angle" and math.isclose(r.value, math.acos(1 / 3))


def test_exact_right_angle():
    r = dihedral_angle(H2, [-SQRT2 / 2, 1, 0], [-SQRT2 / 2, 0, 1])
    # c = (1/2)/(1/2) makes the walls asymptotic at the ideal corner
    assert r.kind == "asymptotic"
    r = dihedral_angle(H2, [0 * SQRT2, 1, 0], [0 * SQRT2, 0, 1])
    assert r.exact_right and r.value == math.pi / 2


@pytest.mark.parametrize("t", [0.3, 0.45, -0.3])
def test_ks_vertices_match_brute_force(t):
    P = make_family("ks_polytope").polytope(t)
    V = enumerate_vertices(P)
    oracle = brute_force_vertices(P.walls)
    assert len(V) == len(oracle)
    got = [np.asarray(v.point.canonical(), dtype=float) for v in V.vertices]
    for o in oracle:
        assert any(np.allclose(o, g, atol=1e-7) for g in got)


def test_ks_vertex_count_frozen():
    # brute-force count, frozen
    assert len(enumerate_vertices(make_family("ks_polytope").polytope(0.3))) == 46


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 3.0), st.floats(0.05, 3.0))
def test_wall_distance_matches_oracle(a, b):
    # walls x1 = tanh(a) and x1 = -tanh(b): distance a + b
    alpha = [-math.tanh(a), 1, 0]
    beta = [-math.tanh(b), -1, 0]
    d = wall_distance(H2, alpha, beta)
    assert math.isclose(d, a + b, rel_tol=1e-9)
    assert math.isclose(wall_distance_oracle(H2, alpha, beta), d, rel_tol=1e-6, abs_tol=1e-6)


def test_wall_distance_rejects_intersecting():
    with pytest.raises(GeometryError):
        wall_distance(H2, [0, 1, 0], [0, 0, 1])


def test_flat_distance_between_lines():
    q = QuadraticForm.hyperbolic(3)
    # two geodesics: x1 = x2 = 0 and x3 = 0, x1 = tanh(0.7)
    d = flat_distance(q, [[0, 1, 0, 0], [0, 0, 1, 0]], [[0, 0, 0, 1], [-math.tanh(0.7), 1, 0, 0]])
    assert math.isclose(d, 0.7, rel_tol=1e-6)


def test_ads_timelike_separation():
    q = QuadraticForm.anti_de_sitter(2)
    # slab around e0 between the spacelike lines met by the timelike geodesic at +-0.2
    s, c = math.sin(0.2), math.cos(0.2)
    r = dihedral_angle(q, [-s, 0, c], [-s, 0, -c])
    assert r.kind == "timelike_separation" and math.isclose(r.value, 0.4)


def test_gram_compare_permutation():
    P = square(0.5)
    Q = Polytope(H2, list(reversed(P.walls)), [1, 0, 0])
    perm = gram_compare(P, Q)
    assert perm is not None
    GP, GQ = gram_matrix(P), gram_matrix(Q)
    assert np.allclose(GP, GQ[np.ix_(perm, perm)])
    assert gram_compare(P, square(0.6)) is None


def test_ks_section_is_cuboctahedron():
    P = make_family("ks_polytope").polytope(0.4)
    S = cross_section(P, [0, 0, 0, 0, 1])
    assert len(S.walls) == 14
    C = make_family("cuboctahedron").polytope(0.5)
    assert gram_compare(S, C, tol=1e-8) is not None
