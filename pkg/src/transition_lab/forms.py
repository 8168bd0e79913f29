"""Diagonal quadratic forms on R^{n+1} and the projective objects built on them.

Points live in the projective sphere (vectors up to a *positive* scalar), and
walls are linear forms ``alpha`` standing for the half-space
``{x : alpha(x) <= 0}``.  The dual pairing of two linear forms uses the same
diagonal sign vector as the primal form; with that convention a linear form
cuts a genuine half-space of hyperbolic space exactly when its dual square is
positive.

All functions accept float arrays or exact object arrays of ``QSqrt2`` and
return results of the same kind.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import config
from .linalg import as_array, as_float, identity, inverse, is_exact, max_abs
from .qsqrt2 import QSqrt2

__all__ = [
    "GeometryError", "DegenerateHyperplaneError", "QuadraticForm",
    "ProjectivePoint", "DualHalfSpace", "ProjectiveMap", "Direction",
    "IsometryCheck", "eval_form", "pairing", "dual_pairing",
    "classify_direction", "reflection_in_hyperplane", "is_isometry",
    "canonical_vector", "projectively_equal", "canonical_matrix",
]


class GeometryError(Exception):
    """Raised when numerical data does not describe a valid geometric object."""


class DegenerateHyperplaneError(GeometryError):
    pass


@dataclass(frozen=True)
class QuadraticForm:
    """Diagonal form ``sum signs[i] * x[i]**2``.

    ``signs`` entries are -1, 0 or +1.  Zero entries describe the degenerate
    forms of Euclidean space (``(0, 1, ..., 1)`` on linear forms) and of
    half-pipe space (``(-1, 1, ..., 1, 0)``).
    """

    signs: tuple

    def __post_init__(self):
        signs = tuple(int(s) for s in self.signs)
        if len(signs) < 2:
            raise ValueError("a quadratic form needs at least two variables")
        if any(s not in (-1, 0, 1) for s in signs):
            raise ValueError(f"signs must be -1, 0 or +1, got {signs}")
        object.__setattr__(self, "signs", signs)

    @classmethod
    def standard(cls, a: int, n: int) -> "QuadraticForm":
        """``q_{a, n+1-a}``: the first ``a`` coordinates negative."""
        return cls(tuple([-1] * a + [1] * (n + 1 - a)))

    @classmethod
    def hyperbolic(cls, n: int) -> "QuadraticForm":
        return cls.standard(1, n)

    @classmethod
    def spherical(cls, n: int) -> "QuadraticForm":
        return cls.standard(0, n)

    @classmethod
    def anti_de_sitter(cls, n: int) -> "QuadraticForm":
        """``-x0^2 + x1^2 + ... + x_{n-1}^2 - x_n^2``: last coordinate timelike."""
        return cls(tuple([-1] + [1] * (n - 1) + [-1]))

    @classmethod
    def half_pipe(cls, n: int) -> "QuadraticForm":
        return cls(tuple([-1] + [1] * (n - 1) + [0]))

    @classmethod
    def euclidean(cls, n: int) -> "QuadraticForm":
        """Dual form of Euclidean space in the chart ``x0 = 1``."""
        return cls(tuple([0] + [1] * n))

    @property
    def dim(self) -> int:
        """Dimension ``n+1`` of the ambient vector space."""
        return len(self.signs)

    @property
    def n(self) -> int:
        return len(self.signs) - 1

    @property
    def negative_count(self) -> int:
        return sum(1 for s in self.signs if s < 0)

    @property
    def is_degenerate(self) -> bool:
        return 0 in self.signs

    @property
    def dual(self) -> "QuadraticForm":
        return self

    def gram(self, exact: bool = False) -> np.ndarray:
        g = identity(self.dim, exact=exact)
        for i, s in enumerate(self.signs):
            g[i, i] = g[i, i] * s
        return g

    def __str__(self):
        return "(" + ",".join("+" if s > 0 else ("-" if s < 0 else "0") for s in self.signs) + ")"


class Direction(str, enum.Enum):
    NEGATIVE = "negative"
    NULL = "null"
    POSITIVE = "positive"


def _vec(x, q: Optional[QuadraticForm] = None) -> np.ndarray:
    v = as_array(x)
    if v.ndim != 1:
        raise ValueError("expected a vector")
    if q is not None and v.shape[0] != q.dim:
        raise ValueError(f"dimension mismatch: vector of length {v.shape[0]} "
                         f"for a form on R^{q.dim}")
    return v


def pairing(q: QuadraticForm, x, y):
    """Bilinear companion ``sum signs[i] x[i] y[i]``."""
    x = _vec(x, q)
    y = _vec(y, q)
    if is_exact(x) and is_exact(y):
        return sum((s * a * b for s, a, b in zip(q.signs, x, y)), QSqrt2(0))
    return float(np.dot(np.asarray(q.signs, dtype=float) * as_float(x), as_float(y)))


def eval_form(q: QuadraticForm, x):
    return pairing(q, x, x)


def dual_pairing(q: QuadraticForm, a, b):
    """Pairing of two linear forms; same diagonal as ``q``."""
    if isinstance(a, DualHalfSpace):
        a = a.coeffs
    if isinstance(b, DualHalfSpace):
        b = b.coeffs
    return pairing(q, a, b)


def _sign_with_tol(value, scale, tol):
    if isinstance(value, QSqrt2):
        return value.sign()
    if abs(value) <= tol * scale:
        return 0
    return 1 if value > 0 else -1


def classify_direction(q: QuadraticForm, x, tol: Optional[float] = None) -> Direction:
    """Sign of ``q(x)``, reporting ``null`` when ``|q(x)| <= tol * |x|^2``."""
    tol = config.resolve(tol)
    x = _vec(x, q)
    if is_exact(x):
        if not any(x):
            raise ValueError("zero vector has no direction type")
        s = eval_form(q, x).sign()
    else:
        norm2 = float(np.dot(x, x))
        if norm2 == 0.0:
            raise ValueError("zero vector has no direction type")
        s = _sign_with_tol(eval_form(q, x), norm2, tol)
    return {-1: Direction.NEGATIVE, 0: Direction.NULL, 1: Direction.POSITIVE}[s]


# -- projective normalization ------------------------------------------------

def canonical_vector(x) -> np.ndarray:
    """Representative with max-magnitude coordinate equal to +-1.

    Only positive rescaling is used, so the class in the projective sphere
    is preserved.
    """
    x = as_array(x)
    m = max_abs(x)
    if not m:
        raise ValueError("the zero vector has no projective class")
    if is_exact(x):
        return np.array([c / m for c in x], dtype=object)
    return x / m


def projectively_equal(x, y, tol: Optional[float] = None) -> bool:
    """Equality up to a positive scalar."""
    tol = config.resolve(tol)
    cx = canonical_vector(x)
    cy = canonical_vector(y)
    if cx.shape != cy.shape:
        return False
    if is_exact(cx) and is_exact(cy):
        return all(a == b for a, b in zip(cx, cy))
    return bool(np.max(np.abs(as_float(cx) - as_float(cy))) <= tol)


def canonical_matrix(m) -> np.ndarray:
    """Divide by the max-magnitude entry; sign fixed by the (0,0) entry when
    nonzero, else by the first nonzero entry."""
    m = as_array(m)
    scale = max_abs(m)
    if not scale:
        raise ValueError("zero matrix")
    exact = is_exact(m)
    if exact:
        out = np.array([[x / scale for x in row] for row in m], dtype=object)
        lead = out[0, 0] if out[0, 0] else next(x for x in out.flat if x)
        if lead.sign() < 0:
            out = -out
        return out
    out = m / scale
    flat = out.ravel()
    thresh = 1e-14
    lead = flat[0] if abs(flat[0]) > thresh else next(x for x in flat if abs(x) > thresh)
    return -out if lead < 0 else out


class ProjectivePoint:
    """Point of the projective sphere, stored as a representative vector."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        v = as_array(coords)
        if v.ndim != 1 or not max_abs(v):
            raise ValueError("a projective point needs a nonzero vector")
        self.coords = v

    @property
    def exact(self) -> bool:
        return is_exact(self.coords)

    def canonical(self) -> np.ndarray:
        return canonical_vector(self.coords)

    def equals(self, other, tol=None) -> bool:
        o = other.coords if isinstance(other, ProjectivePoint) else other
        return projectively_equal(self.coords, o, tol)

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def affine(self, chart: int = 0) -> np.ndarray:
        """Affine coordinates in the chart ``x[chart] = 1`` (float)."""
        v = as_float(self.coords)
        if abs(v[chart]) < 1e-300:
            raise GeometryError("point lies at infinity in this chart")
        return np.delete(v / v[chart], chart)

    def __repr__(self):
        return "[" + ":".join(_fmt(c) for c in self.canonical()) + "]"


class DualHalfSpace:
    """Linear form ``alpha`` up to positive scalar; the half-space is ``alpha <= 0``."""

    __slots__ = ("coeffs", "label")

    def __init__(self, coeffs, label: Optional[str] = None):
        v = as_array(coeffs)
        if v.ndim != 1 or not max_abs(v):
            raise ValueError("a half-space needs a nonzero linear form")
        self.coeffs = v
        self.label = label

    @property
    def exact(self) -> bool:
        return is_exact(self.coeffs)

    def canonical(self) -> np.ndarray:
        return canonical_vector(self.coeffs)

    def __call__(self, x):
        x = x.coords if isinstance(x, ProjectivePoint) else as_array(x)
        if is_exact(self.coeffs) and is_exact(x):
            return sum((a * b for a, b in zip(self.coeffs, x)), QSqrt2(0))
        return float(np.dot(as_float(self.coeffs), as_float(x)))

    def equals(self, other, tol=None) -> bool:
        o = other.coeffs if isinstance(other, DualHalfSpace) else other
        return projectively_equal(self.coeffs, o, tol)

    def __eq__(self, other):
        if not isinstance(other, DualHalfSpace):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def __neg__(self):
        return DualHalfSpace(-self.coeffs, self.label)

    def to_float(self) -> "DualHalfSpace":
        return DualHalfSpace(as_float(self.coeffs), self.label)

    def display(self) -> np.ndarray:
        """Representative whose first nonzero coordinate is +-1 (for printing)."""
        lead = next(c for c in self.coeffs if c)
        a = abs(lead)
        if self.exact:
            return np.array([c / a for c in self.coeffs], dtype=object)
        return self.coeffs / a

    def __repr__(self):
        body = "(" + ":".join(_fmt(c) for c in self.display()) + ")"
        return f"{self.label}={body}" if self.label else body


class ProjectiveMap:
    """Invertible matrix acting on the projective sphere, up to positive scalar."""

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        m = as_array(matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("a projective map needs a square matrix")
        self.matrix = m

    @classmethod
    def identity(cls, dim: int, exact: bool = False) -> "ProjectiveMap":
        return cls(identity(dim, exact=exact))

    @property
    def exact(self) -> bool:
        return is_exact(self.matrix)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __matmul__(self, other):
        if isinstance(other, ProjectiveMap):
            return ProjectiveMap(self.matrix @ other.matrix)
        return NotImplemented

    def inverse(self) -> "ProjectiveMap":
        return ProjectiveMap(inverse(self.matrix))

    def apply(self, p):
        if isinstance(p, ProjectivePoint):
            return ProjectivePoint(self.matrix @ p.coords)
        return self.matrix @ as_array(p)

    def apply_dual(self, alpha: DualHalfSpace) -> DualHalfSpace:
        """Image of the half-space: the linear form ``alpha o M^{-1}``."""
        return DualHalfSpace(alpha.coeffs @ inverse(self.matrix), alpha.label)

    def canonical(self) -> np.ndarray:
        return canonical_matrix(self.matrix)

    def equals(self, other, tol=None) -> bool:
        """Equality up to a positive scalar."""
        tol = config.resolve(tol)
        o = other.matrix if isinstance(other, ProjectiveMap) else as_array(other)
        a = canonical_vector(self.matrix.ravel())
        b = canonical_vector(o.ravel())
        if is_exact(a) and is_exact(b):
            return all(x == y for x, y in zip(a, b))
        return bool(np.max(np.abs(as_float(a) - as_float(b))) <= tol)

    def is_identity(self, tol=None) -> bool:
        return self.equals(identity(self.dim, exact=self.exact), tol)

    def to_float(self) -> "ProjectiveMap":
        return ProjectiveMap(as_float(self.matrix))

    def __repr__(self):
        return f"ProjectiveMap({as_float(self.matrix)!r})"


def _fmt(c) -> str:
    if isinstance(c, QSqrt2):
        return str(c)
    return f"{c:.6g}"


# -- reflections and isometries ----------------------------------------------

def reflection_in_hyperplane(q: QuadraticForm, alpha, tol: Optional[float] = None) -> ProjectiveMap:
    """Reflection ``id - 2 J a a^T / q*(a, a)`` in the kernel of ``alpha``.

    ``J = diag(q.signs)``.  With the Euclidean dual form ``(0, 1, ..., 1)``
    the same formula gives affine reflections in the chart ``x0 = 1``.
    """
    tol = config.resolve(tol)
    a = alpha.coeffs if isinstance(alpha, DualHalfSpace) else _vec(alpha, q)
    if a.shape[0] != q.dim:
        raise ValueError("dimension mismatch")
    d = dual_pairing(q, a, a)
    exact = is_exact(a)
    if exact:
        degenerate = not d
    else:
        degenerate = abs(d) <= tol * float(np.dot(a, a))
    if degenerate:
        raise DegenerateHyperplaneError(
            "lightlike/degenerate hyperplane has no canonical reflection")
    ja = np.array([s * c for s, c in zip(q.signs, a)], dtype=a.dtype)
    outer = np.outer(ja, a)
    if exact:
        m = identity(q.dim, exact=True) - np.array(
            [[2 * x / d for x in row] for row in outer], dtype=object)
    else:
        m = np.eye(q.dim) - 2.0 * outer / d
    return ProjectiveMap(m)


@dataclass(frozen=True)
class IsometryCheck:
    """Outcome of :func:`is_isometry`; truthy when ``M`` is a (scaled) isometry."""

    ok: bool
    scale: Optional[float]
    sheet_preserving: Optional[bool]
    residual: float

    def __bool__(self):
        return self.ok


def is_isometry(q: QuadraticForm, m, tol: Optional[float] = None) -> IsometryCheck:
    """Test ``M^T J M = lambda J`` for some ``lambda > 0``.

    For degenerate forms this checks that the degenerate pairing is preserved.
    When ``q`` has exactly one negative sign, ``sheet_preserving`` reports
    whether the positive sheet of the two-sheeted quadric is kept.
    """
    tol = config.resolve(tol)
    mat = m.matrix if isinstance(m, ProjectiveMap) else as_array(m)
    exact = is_exact(mat)
    g = q.gram(exact=exact)
    p = mat.T @ g @ mat
    idx = [i for i, s in enumerate(q.signs) if s != 0]
    if exact:
        lam = sum((p[i, i] * q.signs[i] for i in idx), QSqrt2(0)) / len(idx)
        diff = p - np.array([[lam * x for x in row] for row in g], dtype=object)
        residual = float(max_abs(diff))
        ok = residual == 0 and lam.sign() > 0
        scale = float(lam)
    else:
        lam = float(sum(p[i, i] * q.signs[i] for i in idx) / len(idx))
        residual = float(np.max(np.abs(p - lam * g)))
        ok = lam > 0 and residual <= tol * max(1.0, float(np.max(np.abs(p))))
        scale = lam
    sheet = None
    negs = [i for i, s in enumerate(q.signs) if s < 0]
    if len(negs) == 1:
        k = negs[0]
        sheet = bool(float(mat[k, k]) > 0)
    return IsometryCheck(bool(ok), scale, sheet, residual)
