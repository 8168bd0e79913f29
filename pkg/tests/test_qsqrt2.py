import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from transition_lab.qsqrt2 import QSqrt2, SQRT2, exact_sqrt, is_exact, to_exact

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=30)
elements = st.builds(QSqrt2, rationals, rationals)
nonzero = elements.filter(lambda x: bool(x))


@given(elements, elements, elements)
def test_ring_laws(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x
    assert x * y == y * x
    assert x - x == 0


@given(nonzero)
def test_inverse_and_norm(x):
    assert x * (1 / x) == 1
    assert x * x.conjugate() == x.norm()
    assert x.norm() != 0


@given(elements, elements)
def test_order_agrees_with_floats(x, y):
    fx, fy = float(x), float(y)
    if abs(fx - fy) > 1e-9:
        assert (x < y) == (fx < fy)
    assert x.sign() == (0 if not x else (1 if fx > 0 else -1))


@given(elements)
def test_sqrt_of_square(x):
    r = exact_sqrt(x * x)
    assert r == abs(x)


def test_sqrt2_basics():
    assert SQRT2 * SQRT2 == 2
    assert exact_sqrt(Fraction(1, 2)) == SQRT2 / 2
    assert exact_sqrt(3 + 2 * SQRT2) == 1 + SQRT2
    assert math.isclose(float(exact_sqrt(QSqrt2(6, 4))), math.sqrt(6 + 4 * math.sqrt(2)))


def test_sqrt_outside_field_raises():
    with pytest.raises(ValueError):
        exact_sqrt(3)
    with pytest.raises(ValueError):
        exact_sqrt(-1)


def test_conversions():
    assert is_exact(Fraction(1, 3)) and is_exact(SQRT2)
    assert not is_exact(0.5)
    assert to_exact(Fraction(2, 3)) == QSqrt2(Fraction(2, 3))
    assert str(QSqrt2(0, -1)) == "-sqrt2"


def test_hash_matches_rationals():
    assert hash(QSqrt2(3)) == hash(QSqrt2(Fraction(6, 2)))
    assert QSqrt2(3) == 3
