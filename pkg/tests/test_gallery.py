import math

import numpy as np
import pytest

from transition_lab.forms import GeometryError, is_isometry
from transition_lab.gallery import (
    FAMILIES, SCHEMES, UnknownNameError, exp_deform_vertices, make_family, pairing_scheme,
    recipe_matrix,
)
from transition_lab.param import DomainError
from transition_lab.polytope import adjacency, dihedral_angle, enumerate_vertices

SAMPLE_T = {name: [0.5, -0.5] for name in FAMILIES}
SAMPLE_T["ks_polytope"] = [0.3, -0.3]


@pytest.mark.parametrize("name", FAMILIES)
def test_family_builds_on_both_sides(name):
    rec = make_family(name)
    for t in SAMPLE_T[name]:
        P = rec.polytope(t)
        assert P.geometry == rec.geometry_at(t)
        V = enumerate_vertices(P)
        assert len(V) > 0 and V.max_residual < 1e-10


@pytest.mark.parametrize("name", SCHEMES)
@pytest.mark.parametrize("t", [0.5, 0.2, -0.4])
def test_pairings_map_walls_and_preserve_form(name, t):
    sc = pairing_scheme(name)
    res = sc.check(t)
    assert all(res.values()), res


def test_unknown_names():
    with pytest.raises(UnknownNameError):
        make_family("dodecahedron")
    with pytest.raises(KeyError):
        pairing_scheme("nope")


def test_domain_enforced():
    with pytest.raises(DomainError):
        make_family("oct_collapse").polytope(1.5)
    with pytest.raises(DomainError):
        make_family("exp_quadrilateral").polytope(-4.0)


def test_ideal_octahedron_exact():
    from fractions import Fraction
    P = make_family("ideal_octahedron").polytope(Fraction(1))
    assert P.exact
    V = enumerate_vertices(P)
    assert len(V.ideal_vertices) == 6
    for i, j in adjacency(P, V):
        r = dihedral_angle(P.form, P.walls[i], P.walls[j])
        assert r.exact_right


def test_cuboctahedron_right_angled():
    P = make_family("cuboctahedron").polytope(0.5)
    assert len(P.walls) == 14
    for i, j in adjacency(P):
        assert math.isclose(dihedral_angle(P.form, P.walls[i], P.walls[j]).value, math.pi / 2)


def test_oct_prime_rows_orthogonal():
    rec = make_family("oct_prime")
    for t in (0.7, -0.7):
        P = rec.polytope(t)
        for i in range(1, 5):
            a, b = P.wall(f"L{i}"), P.wall(f"R{i}")
            assert abs(dihedral_angle(P.form, a, b).invariant) < 1e-12


def test_exp_quadrilateral_matches_vertex_construction():
    # walls through the vertices of the exponentially deformed square
    rec = make_family("exp_quadrilateral")
    for t, curv in [(0.8, "hyp"), (-0.6, "sph")]:
        V = exp_deform_vertices(abs(t), curv)
        walls = rec.walls_at(t)
        for w in walls:
            on = [abs(float(np.dot(w.coeffs, v.coords))) < 1e-12 for v in V]
            assert sum(on) == 2


@pytest.mark.parametrize("t", [0.3, -0.3])
def test_recipes_are_isometries(t):
    sc = pairing_scheme("borromean_double")
    rec = sc.record()
    for p in sc.pairings:
        M = recipe_matrix(p.recipe, rec, t)
        assert is_isometry(rec.form(t), M).ok


def test_numeric_wall_has_no_limit():
    from transition_lab.param import NoLimitError
    from transition_lab.report import limit_walls
    with pytest.raises(NoLimitError):
        limit_walls("exp_quadrilateral", "gamma", "pos")


def test_geometry_error_for_bad_interior():
    rec = make_family("oct_prime")
    with pytest.raises((GeometryError, DomainError)):
        rec.polytope(0.0)
