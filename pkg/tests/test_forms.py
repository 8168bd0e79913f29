import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from transition_lab import config
from transition_lab.forms import (
    DegenerateHyperplaneError, Direction, DualHalfSpace, ProjectiveMap, ProjectivePoint,
    QuadraticForm, canonical_matrix, canonical_vector, classify_direction, dual_pairing,
    eval_form, is_isometry, projectively_equal, reflection_in_hyperplane,
)
from transition_lab.qsqrt2 import SQRT2, QSqrt2

FORMS = [QuadraticForm.hyperbolic(3), QuadraticForm.spherical(3), QuadraticForm.anti_de_sitter(3)]

coords = st.lists(st.floats(-5, 5, allow_nan=False), min_size=4, max_size=4)


def test_named_forms():
    assert QuadraticForm.hyperbolic(3).signs == (-1, 1, 1, 1)
    assert QuadraticForm.anti_de_sitter(3).signs == (-1, 1, 1, -1)
    assert QuadraticForm.half_pipe(3).signs == (-1, 1, 1, 0)
    assert QuadraticForm.euclidean(2).signs == (0, 1, 1)
    assert QuadraticForm.half_pipe(3).is_degenerate
    with pytest.raises(ValueError):
        QuadraticForm((2, 1))


def test_direction_types():
    q = QuadraticForm.hyperbolic(2)
    assert classify_direction(q, [1, 0, 0]) is Direction.NEGATIVE
    assert classify_direction(q, [1, 1, 0]) is Direction.NULL
    assert classify_direction(q, [0, 1, 0]) is Direction.POSITIVE
    assert classify_direction(q, [1, 1 + 1e-13, 0]) is Direction.NULL
    assert classify_direction(q, [1, 1 + 1e-13, 0], tol=0) is Direction.POSITIVE
    with pytest.raises(ValueError):
        classify_direction(q, [0, 0, 0])


def test_exact_null_detection():
    q = QuadraticForm.hyperbolic(2)
    assert classify_direction(q, [SQRT2, 1, 1]) is Direction.NULL
    assert eval_form(q, [SQRT2, 1, 1]) == 0


def test_tolerance_override(monkeypatch):
    q = QuadraticForm.hyperbolic(2)
    x = [1, 1 + 1e-6, 0]
    assert classify_direction(q, x) is Direction.POSITIVE
    with config.tolerance(1e-4):
        assert classify_direction(q, x) is Direction.NULL
    assert config.get_tolerance() == config.DEFAULT_TOL


def test_env_tolerance(monkeypatch):
    monkeypatch.setattr(config, "_tol", None)
    monkeypatch.setenv(config.ENV_VAR, "1e-3")
    assert config.get_tolerance() == 1e-3
    monkeypatch.setattr(config, "_tol", None)


def test_canonical_vector_keeps_sign():
    v = canonical_vector([2.0, -4.0, 1.0])
    assert np.allclose(v, [0.5, -1.0, 0.25])
    e = canonical_vector([Fraction(1), -2 * SQRT2])
    assert e[1] == -1 and e[0] == SQRT2 / 4
    assert projectively_equal([1, 2, 3], [2, 4, 6])
    assert not projectively_equal([1, 2, 3], [-1, -2, -3])


def test_canonical_matrix_sign():
    m = canonical_matrix(-np.eye(3) * 2)
    assert np.allclose(m, np.eye(3))


def test_projective_objects():
    p = ProjectivePoint([2, 0, 0])
    assert p.equals(ProjectivePoint([1, 0, 0]))
    assert not p.equals(ProjectivePoint([-1, 0, 0]))
    a = DualHalfSpace([0, 1, 0], "x")
    assert a([1, -1, 0]) < 0
    assert (-a).equals(DualHalfSpace([0, -1, 0]))


@pytest.mark.parametrize("q", FORMS, ids=str)
@settings(max_examples=60, deadline=None)
@given(a=coords)
def test_reflection_is_isometric_involution(q, a):
    a = np.array(a)
    d = dual_pairing(q, a, a)
    assume(abs(d) > 1e-2 * max(1.0, float(a @ a)))
    r = reflection_in_hyperplane(q, a)
    check = is_isometry(q, r)
    assert check.ok and math.isclose(check.scale, 1.0, rel_tol=1e-9)
    assert np.allclose(r.matrix @ r.matrix, np.eye(4), atol=1e-8 * max(1, abs(1 / d)) * (a @ a))
    # the reflection fixes the hyperplane and flips the wall
    assert r.apply_dual(DualHalfSpace(a)).equals(DualHalfSpace(-a), tol=1e-8)


def test_exact_reflection():
    q = QuadraticForm.hyperbolic(2)
    r = reflection_in_hyperplane(q, [QSqrt2(0), QSqrt2(1), SQRT2])
    assert (r @ r).is_identity()
    chk = is_isometry(q, r)
    assert chk.ok and chk.residual == 0 and chk.sheet_preserving


def test_lightlike_reflection_rejected():
    with pytest.raises(DegenerateHyperplaneError):
        reflection_in_hyperplane(QuadraticForm.hyperbolic(2), [1, 1, 0])


def test_sheet_preservation():
    q = QuadraticForm.hyperbolic(1)
    assert is_isometry(q, np.diag([1.0, -1.0])).sheet_preserving
    assert not is_isometry(q, np.diag([-1.0, 1.0])).sheet_preserving
    assert not is_isometry(q, np.diag([1.0, 2.0])).ok


def test_projective_map_inverse():
    m = ProjectiveMap(np.array([[2.0, 1.0], [1.0, 2.0]]))
    assert (m @ m.inverse()).is_identity()
