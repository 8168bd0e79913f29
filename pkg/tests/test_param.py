import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from transition_lab.param import (
    ATOMS, DomainError, Interval, NoLimitError, ParamScalar, dual_rescale, load_family_data,
    parse, rescaled_limit,
)
from transition_lab.qsqrt2 import SQRT2, QSqrt2

leaves = st.one_of(
    st.sampled_from(ATOMS).map(ParamScalar.atom),
    st.sampled_from([QSqrt2(1), QSqrt2(-2), SQRT2, QSqrt2(Fraction(1, 3), 1)]).map(ParamScalar.const),
)
exprs = st.recursive(
    leaves,
    lambda kids: st.one_of(
        st.tuples(kids, kids).map(lambda p: p[0] + p[1]),
        st.tuples(kids, kids).map(lambda p: p[0] * p[1]),
        kids.map(lambda k: -k),
    ),
    max_leaves=6,
)


@pytest.fixture(scope="module")
def data():
    return load_family_data()


@given(exprs)
def test_prefix_round_trip(e):
    assert parse(e.to_prefix()) == e


@settings(deadline=None)
@given(exprs, st.sampled_from([Fraction(1, 2), Fraction(-1, 3), Fraction(3, 4)]))
def test_float_and_exact_evaluation_agree(e, t):
    try:
        exact = e.evaluate(t)
    except ValueError:
        # square roots leaving Q(sqrt2)
        return
    assert math.isclose(float(exact), e.evaluate(float(t)), rel_tol=1e-12, abs_tol=1e-12)


@settings(deadline=None, max_examples=50)
@given(exprs, st.sampled_from([1, -1]))
def test_series_matches_values_near_zero(e, side):
    s = e.series(side, order=6)
    h = side * 1e-3
    approx = sum(float(s.coeff(k)) * h ** k for k in range(s.start, s.start + 6))
    assert math.isclose(approx, e.evaluate(h), rel_tol=1e-9, abs_tol=1e-12)


def test_parse_errors():
    for bad in ["", "(* t)", "(/ t 2)", "(+ t", "foo", "t )"]:
        with pytest.raises(ValueError):
            parse(bad)


def test_abs_atoms():
    assert parse("|t|").depends_only_on_abs()
    assert not parse("t").depends_only_on_abs()


def test_interval():
    iv = Interval.parse("(-1, 1/sqrt(3))")
    assert 0.5 in iv and -1 not in iv and 1 / math.sqrt(3) not in iv
    assert 1 in Interval.parse("(-1, 1]")
    with pytest.raises(ValueError):
        Interval.parse("-1, 1")


def test_domain_error(data):
    wall = data["oct_collapse"]["walls"][0]
    with pytest.raises(DomainError):
        wall.raw(2.0)


def test_exact_evaluation(data):
    wall = data["oct_collapse"]["walls"][0]
    raw = wall.raw(Fraction(1, 2))
    assert list(raw) == [QSqrt2(Fraction(-1, 2)), -SQRT2 / 4, 0, -1]


def test_gamma_limit_of_collapsing_octahedron(data):
    walls = {w.label: w for w in data["oct_collapse"]["walls"]}
    lim = rescaled_limit(walls["R1"], "gamma", "pos")
    # (-t, -sqrt2, 0, t^2) -> (-1, -sqrt2, 0, 0) up to positive scale
    assert list(lim.coeffs) == [-SQRT2 / 2, -1, 0, 0]


def test_eta_limit_agrees_with_small_t(data):
    for w in data["oct_collapse"]["walls"]:
        for side in (1, -1):
            lim = rescaled_limit(w, "eta", side)
            near = dual_rescale(w, "eta", side * 1e-7)
            assert np.allclose(near.coeffs, np.array(lim.coeffs, dtype=float), atol=1e-6)


def test_no_limit_guard():
    from transition_lab.param import HalfSpaceFamily
    iv = Interval.parse("(-1, 1)")
    # (t, 1 + t) has a limit; a wall vanishing to all known orders does not
    bad = HalfSpaceFamily("z", (parse("0"), parse("0"), parse("0")), iv)
    with pytest.raises(NoLimitError):
        rescaled_limit(bad, "gamma", "pos")


def test_data_file_round_trip(data):
    for name, rec in data.items():
        for w in rec["walls"]:
            r = w.to_record()
            assert [parse(c) for c in r["coeffs"]] == list(w.coeffs), name
