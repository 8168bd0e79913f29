import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from transition_lab.acceptance import random_mink
from transition_lab.forms import GeometryError
from transition_lab.halfpipe import (
    HpIsometry, HpPoint, MinkIsometry, classify_hp, degenerate_reflection_family, hp_to_mink,
    hp_translation_length_on_H1, hp_walls_intersect, is_degenerate_wall, mink_norm,
    mink_point_to_hp_wall, mink_to_hp,
)
from transition_lab.qsqrt2 import SQRT2, QSqrt2

seeds = st.integers(0, 2 ** 32 - 1)
dims = st.sampled_from([2, 3])


@settings(max_examples=60, deadline=None)
@given(seeds, dims)
def test_dictionary_is_homomorphism(seed, n):
    rng = np.random.default_rng(seed)
    f, g = random_mink(rng, n), random_mink(rng, n)
    lhs = mink_to_hp(f @ g).matrix
    rhs = mink_to_hp(f).matrix @ mink_to_hp(g).matrix
    assert np.allclose(lhs, rhs, atol=1e-9 * max(1.0, np.abs(rhs).max()))


@settings(max_examples=60, deadline=None)
@given(seeds, dims)
def test_dictionary_round_trip_and_inverse(seed, n):
    rng = np.random.default_rng(seed)
    f = random_mink(rng, n)
    assert hp_to_mink(mink_to_hp(f)).equals(f, tol=1e-9)
    assert mink_to_hp(f.inverse()).equals(mink_to_hp(f).inverse(), tol=1e-8)
    y = rng.normal(size=n)
    assert np.allclose((f @ f.inverse())(y), y)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_walls_meet_iff_spacelike(seed):
    rng = np.random.default_rng(seed)
    w, v = rng.normal(size=3), rng.normal(size=3)
    q = mink_norm(w - v)
    if abs(q) < 1e-6:
        return
    assert hp_walls_intersect(mink_point_to_hp_wall(w), mink_point_to_hp_wall(v)) == (q > 0)


def test_exact_central_element():
    m = MinkIsometry(-np.eye(2, dtype=object) * QSqrt2(1), np.array([QSqrt2(0), QSqrt2(0)]))
    h = mink_to_hp(m)
    assert h.exact and h.eps == -1
    assert classify_hp(h).kind == "nondegenerate_reflection"


def test_translation_classified_as_rotation():
    b = np.array([QSqrt2(1), QSqrt2(0, 1)])  # q(b) = 1
    c = classify_hp(mink_to_hp(MinkIsometry.translation(b)))
    assert c.kind == "hp_rotation" and math.isclose(c.magnitude, 1.0)
    assert is_degenerate_wall(c.wall)


def test_timelike_translation_is_other():
    c = classify_hp(mink_to_hp(MinkIsometry.translation([2.0, 1.0])))
    assert c.kind == "other"


def test_lightlike_translation_is_ambiguous():
    with pytest.raises(GeometryError):
        classify_hp(mink_to_hp(MinkIsometry.translation([1.0, 1.0 + 1e-13])))


def test_point_reflection_wall():
    c = classify_hp(mink_to_hp(MinkIsometry(-np.eye(3), np.array([2.0, 0.0, 4.0]))))
    assert c.kind == "nondegenerate_reflection"
    assert c.wall.equals(mink_point_to_hp_wall([1.0, 0.0, 2.0]))


@pytest.mark.parametrize("s", [0.0, 0.7, -1.3])
def test_degenerate_reflection_family(s):
    h = degenerate_reflection_family([0.0, 1.0, 0.0], s)
    c = classify_hp(h)
    assert c.kind == "degenerate_reflection"
    assert math.isclose(c.parameter, s, abs_tol=1e-12)
    assert is_degenerate_wall(c.wall)
    assert (h @ h).equals(mink_to_hp(MinkIsometry.linear(np.eye(3))), tol=1e-9)


def test_degenerate_family_exact():
    h = degenerate_reflection_family(np.array([QSqrt2(0), QSqrt2(1)]), QSqrt2(0, 1))
    assert h.exact


def test_from_matrix_rejects_non_block():
    with pytest.raises(GeometryError):
        HpIsometry.from_matrix(np.array([[1.0, 0, 1], [0, 1, 0], [0, 0, 1]]))
    M = mink_to_hp(MinkIsometry.translation([1.0, 2.0])).matrix
    assert HpIsometry.from_matrix(3 * M).equals(mink_to_hp(MinkIsometry.translation([1.0, 2.0])))
    # matrices are read up to positive scale only; -M is the antipodal composite
    with pytest.raises(GeometryError):
        HpIsometry.from_matrix(-M)


def test_boost_length():
    c, s = 3.0, 2 * math.sqrt(2)
    h = mink_to_hp(MinkIsometry.linear(np.array([[c, -s], [-s, c]])))
    assert math.isclose(hp_translation_length_on_H1(h), 2 * math.asinh(1.0))
    with pytest.raises(GeometryError):
        hp_translation_length_on_H1(mink_to_hp(MinkIsometry.linear(np.eye(2))))


def test_hp_point():
    p = HpPoint.from_coords([2.0, 0.0, 0.0, 6.0])
    assert np.allclose(p.xbar, [1, 0, 0]) and p.height == 3.0
    with pytest.raises(GeometryError):
        HpPoint.from_coords([0.0, 1.0, 0.0, 1.0])


def test_exact_sqrt2_translation():
    b = np.array([QSqrt2(0), SQRT2])
    h = mink_to_hp(MinkIsometry.translation(b))
    assert h.exact and hp_to_mink(h).equals(MinkIsometry.translation(b))
