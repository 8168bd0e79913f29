"""Exact arithmetic in the quadratic field Q(sqrt 2).

Every wall of the gallery at rational parameter values has coordinates of
the form ``a + b*sqrt(2)`` with ``a, b`` rational, so this small number type
is enough to reproduce the coefficient tables and the right-angle checks
with no rounding at all.  Instances interoperate with ``int`` and
``Fraction`` and can live inside ``numpy`` object arrays, which is how the
exact mode of the linear algebra is implemented.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

__all__ = ["QSqrt2", "SQRT2", "exact_sqrt", "to_exact", "is_exact"]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class QSqrt2:
    """The number ``a + b*sqrt(2)`` with rational ``a`` and ``b``."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = _frac(a)
        self.b = _frac(b)

    # -- construction helpers -------------------------------------------
    @classmethod
    def coerce(cls, x) -> "QSqrt2":
        if isinstance(x, QSqrt2):
            return x
        return cls(_frac(x), 0)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def conjugate(self) -> "QSqrt2":
        return QSqrt2(self.a, -self.b)

    def norm(self) -> Fraction:
        """Field norm ``a^2 - 2 b^2``."""
        return self.a * self.a - 2 * self.b * self.b

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        try:
            o = QSqrt2.coerce(other)
        except TypeError:
            return NotImplemented
        return QSqrt2(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt2(-self.a, -self.b)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            o = QSqrt2.coerce(other)
        except TypeError:
            return NotImplemented
        return QSqrt2(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        try:
            o = QSqrt2.coerce(other)
        except TypeError:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        try:
            o = QSqrt2.coerce(other)
        except TypeError:
            return NotImplemented
        return QSqrt2(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = QSqrt2.coerce(other)
        except TypeError:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt 2)")
        num = self * o.conjugate()
        return QSqrt2(num.a / n, num.b / n)

    def __rtruediv__(self, other):
        try:
            o = QSqrt2.coerce(other)
        except TypeError:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return QSqrt2(1) / (self ** (-k))
        out = QSqrt2(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- ordering ---------------------------------------------------------
    def sign(self) -> int:
        """Exact sign, decided without floating point."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with 2 b^2
        d = self.a * self.a - 2 * self.b * self.b
        if d == 0:
            return 0
        return sa if d > 0 else sb

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def _cmp(self, other) -> int:
        return (self - QSqrt2.coerce(other)).sign()

    def __eq__(self, other):
        if isinstance(other, float):
            return float(self) == other
        try:
            o = QSqrt2.coerce(other)
        except TypeError:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __bool__(self):
        return self.a != 0 or self.b != 0

    # -- conversion -------------------------------------------------------
    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(2.0)

    def __repr__(self):
        return f"QSqrt2({self.a}, {self.b})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        rad = "sqrt2" if self.b == 1 else ("-sqrt2" if self.b == -1 else f"{self.b}*sqrt2")
        if self.a == 0:
            return rad
        if rad.startswith("-"):
            return f"{self.a}-{rad[1:]}"
        return f"{self.a}+{rad}"


SQRT2 = QSqrt2(0, 1)


def _rational_sqrt(r: Fraction):
    if r < 0:
        return None
    n, d = r.numerator, r.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def exact_sqrt(x) -> QSqrt2:
    """Square root inside Q(sqrt 2), or ``ValueError`` when it leaves the field.

    Only the cases met by the gallery are handled: rational squares and
    rational multiples of 2 (``sqrt(2 q^2) = q sqrt 2``), plus perfect squares
    ``(c + d sqrt2)^2`` found by solving the norm equation.
    """
    x = QSqrt2.coerce(x)
    if x.sign() < 0:
        raise ValueError(f"negative radicand {x}")
    if x.b == 0:
        r = _rational_sqrt(x.a)
        if r is not None:
            return QSqrt2(r)
        r = _rational_sqrt(x.a / 2)
        if r is not None:
            return QSqrt2(0, r)
        raise ValueError(f"sqrt({x}) is not in Q(sqrt 2)")
    # (c + d sqrt2)^2 = c^2 + 2 d^2 + 2 c d sqrt2
    n = _rational_sqrt(x.norm())
    if n is not None:
        for c2 in ((x.a + n) / 2, (x.a - n) / 2):
            c = _rational_sqrt(c2)
            if c is None or c == 0:
                continue
            d = x.b / (2 * c)
            cand = QSqrt2(c, d)
            if cand * cand == x:
                return abs(cand)
    raise ValueError(f"sqrt({x}) is not in Q(sqrt 2)")


def to_exact(x) -> QSqrt2:
    """Coerce ints, Fractions, and decimal strings to ``QSqrt2``."""
    if isinstance(x, QSqrt2):
        return x
    if isinstance(x, str):
        return QSqrt2(Fraction(x))
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a Fraction or a string")
    return QSqrt2.coerce(x)


def is_exact(x) -> bool:
    return isinstance(x, (QSqrt2, Fraction, int)) and not isinstance(x, bool)
