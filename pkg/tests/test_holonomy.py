import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from transition_lab.forms import GeometryError
from transition_lab.gallery import pairing_scheme
from transition_lab.halfpipe import MinkIsometry, mink_to_hp
from transition_lab.holonomy import (
    LoopWord, cone_angle, detect_singularity, edge_cycle, holonomy,
)
from transition_lab.linalg import as_float


def torus_cone_oracle(t):
    # Klein square of half side s: corner angle arccos(s^2 / (1 - s^2)), or on
    # the spherical side arccos(-c) with c = sin^2 / (sin^2 + 2 cos^2)
    if t > 0:
        s2 = (math.tanh(t) * math.sqrt(2) / 2) ** 2
        return 4 * math.acos(s2 / (1 - s2))
    a2 = math.sin(-t) ** 2 / 2
    k2 = math.cos(-t) ** 2
    return 4 * math.acos(-a2 / (a2 + k2))


def borromean_cone_oracle(t):
    # walls (-t, -+sqrt2 t^2, 0, -1) of the collapsing octahedron
    c = (1 - t * t - 2 * t ** 4) / (1 - t * t + 2 * t ** 4)
    return 2 * math.acos(-c)


def test_parse_words():
    assert str(LoopWord.parse("[a,b]")) == "a b a^-1 b^-1"
    assert LoopWord.parse("a, b^-1").letters == (("a", 1), ("b", -1))
    assert LoopWord.parse("a b").inverse().letters == (("b", -1), ("a", -1))
    with pytest.raises(ValueError):
        LoopWord.parse("a^2")


words = st.lists(st.tuples(st.sampled_from(["a", "b"]), st.sampled_from([1, -1])), max_size=5)


@settings(max_examples=40, deadline=None)
@given(words, words)
def test_holonomy_is_homomorphism(u, v):
    sc = pairing_scheme("torus_from_quadrilateral")
    U, V = LoopWord(tuple(u)), LoopWord(tuple(v))
    lhs = as_float(holonomy(U * V, sc, 0.5).matrix)
    rhs = as_float(holonomy(U, sc, 0.5).matrix) @ as_float(holonomy(V, sc, 0.5).matrix)
    assert np.allclose(lhs, rhs, atol=1e-8 * max(1, np.abs(rhs).max()))
    inv = as_float(holonomy(U.inverse(), sc, 0.5).matrix)
    assert np.allclose(inv @ as_float(holonomy(U, sc, 0.5).matrix), np.eye(3), atol=1e-8)


def test_unknown_letter():
    with pytest.raises(KeyError):
        holonomy("[a,z]", "torus_from_quadrilateral", 0.5)


@pytest.mark.parametrize("t", [0.25, 0.5, 1.0, 2.0, 4.0, -0.3, -0.6])
def test_torus_cone_angle(t):
    cyc, sc = edge_cycle("quadrilateral_puncture")
    assert cone_angle(cyc, sc, t) == pytest.approx(torus_cone_oracle(t), abs=1e-10)


@pytest.mark.parametrize("t", [0.8, 0.6, 0.4, 0.2, 0.1])
def test_borromean_cone_angle(t):
    cyc, sc = edge_cycle("borromean_edge", t)
    assert cone_angle(cyc, sc, t) == pytest.approx(borromean_cone_oracle(t), abs=1e-10)


def test_frozen_cone_angles():
    # oracle values, frozen
    cyc, sc = edge_cycle("quadrilateral_puncture")
    got = [cone_angle(cyc, sc, t) for t in (0.25, 0.5, 1, 2, 4)]
    assert got == pytest.approx([6.1595, 5.8039, 4.6000, 2.0784, 0.2928], abs=1e-4)
    got = [cone_angle(*edge_cycle("borromean_edge", t), t) for t in (0.8, 0.6, 0.4, 0.2, 0.1)]
    assert got == pytest.approx([2.3416, 4.0162, 5.3150, 6.0525, 6.2263], abs=1e-4)
    got = [cone_angle(*edge_cycle("borromean_edge", t), t) for t in (-0.3, -0.6)]
    assert got == pytest.approx([6.7684, 7.9297], abs=1e-4)


def test_borromean_flat_at_one():
    assert cone_angle(*edge_cycle("borromean_edge", 1.0), 1.0) == pytest.approx(0.0, abs=1e-12)


def test_torus_commutator_is_elliptic():
    H = holonomy("[a,b]", "torus_from_quadrilateral", 0.5)
    s = detect_singularity(H, "hyp")
    assert s.kind == "cone"
    cyc, sc = edge_cycle("quadrilateral_puncture")
    assert s.angle == pytest.approx(2 * math.pi - cone_angle(cyc, sc, 0.5), abs=1e-9)


@pytest.mark.parametrize("t", [0.5, -0.5])
def test_three_torus_commutators_trivial(t):
    for w in ("[x,y]", "[y,z]", "[x,z]"):
        H = holonomy(w, "three_torus_translations", t)
        assert detect_singularity(H, "eucl").kind == "trivial"


def test_half_pipe_limit_commutator():
    H = holonomy("[a,b]", "torus_from_quad_prime", limit="eta", side="pos")
    s = detect_singularity(H, "hp")
    # translation (4, -4 sqrt2) has q = 16
    assert s.kind == "cone" and s.magnitude == pytest.approx(4.0)


def test_detect_rotation_angle():
    c, s = math.cos(0.3), math.sin(0.3)
    R = np.array([[1, 0, 0], [0, c, -s], [0, s, c]])
    assert detect_singularity(R, "hyp").angle == pytest.approx(0.3)
    assert detect_singularity(np.diag([1.0, 1.0, -1.0]), "hyp").kind == "other"
    with pytest.raises(ValueError):
        detect_singularity(R, "bogus")


def test_hp_singularity_other():
    h = mink_to_hp(MinkIsometry.translation([2.0, 1.0]))
    assert detect_singularity(h.matrix, "hp").kind == "other"


def test_undefined_angle():
    cyc, sc = edge_cycle("quadrilateral_puncture")
    with pytest.raises(GeometryError):
        cone_angle(cyc, "torus_from_quad_prime", -0.5)
