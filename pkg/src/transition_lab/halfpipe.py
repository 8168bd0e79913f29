"""Half-pipe space as the space of spacelike hyperplanes of Minkowski space.

A point ``(xbar, h)`` of half-pipe space ``HP^n`` (``xbar`` on the upper
sheet of ``H^{n-1}``) is the spacelike hyperplane ``{y : <xbar, y> = h}`` of
``M^n``.  Under this duality ``Isom(M^n) = O(1, n-1) x| R^n`` becomes the
group of ``(n+1) x (n+1)`` matrices ``[[A, 0], [v, eps]]`` with ``A`` in
``O_+(1, n-1)`` and ``eps = +-1``.  Here ``<., .>`` is the Minkowski form
with ``J = diag(-1, 1, ..., 1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import config
from .forms import DualHalfSpace, GeometryError, ProjectiveMap, projectively_equal
from .linalg import as_array, as_float, identity, inverse, is_exact, nullspace
from .qsqrt2 import QSqrt2

__all__ = [
    "HpIsometry", "MinkIsometry", "HpPoint", "HpClassification", "mink_to_hp",
    "hp_to_mink", "hp_point_to_plane", "mink_point_to_hp_wall", "classify_hp",
    "degenerate_reflection_family", "hp_translation_length_on_H1",
    "minkowski_J", "mink_norm", "hp_walls_intersect", "is_degenerate_wall",
]


def minkowski_J(n: int, exact: bool = False) -> np.ndarray:
    J = identity(n, exact=exact)
    J[0, 0] = -J[0, 0]
    return J


def mink_norm(b):
    """Minkowski square ``q(b) = -b0^2 + b1^2 + ...``."""
    b = as_array(b)
    if is_exact(b):
        return sum((x * x for x in b[1:]), QSqrt2(0)) - b[0] * b[0]
    return float(-b[0] ** 2 + np.dot(b[1:], b[1:]))


def _mink_pair(a, b):
    a = as_array(a)
    b = as_array(b)
    if is_exact(a) and is_exact(b):
        return sum((x * y for x, y in zip(a[1:], b[1:])), QSqrt2(0)) - a[0] * b[0]
    a, b = as_float(a), as_float(b)
    return float(-a[0] * b[0] + np.dot(a[1:], b[1:]))


@dataclass(frozen=True, eq=False)
class MinkIsometry:
    """The Minkowski isometry ``y -> L y + b``."""

    L: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        L = as_array(self.L)
        b = as_array(self.b)
        if is_exact(L) != is_exact(b):
            L, b = as_float(L), as_float(b)
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "b", b)
        n = L.shape[0]
        if L.shape != (n, n) or b.shape != (n,):
            raise ValueError("shape mismatch between linear and translation parts")
        J = minkowski_J(n, is_exact(L))
        res = L.T @ J @ L - J
        if is_exact(L):
            if any(res.flat):
                raise GeometryError("linear part is not in O(1, n-1)")
        elif np.max(np.abs(res)) > 1e-8 * max(1.0, float(np.max(np.abs(L))) ** 2):
            raise GeometryError("linear part is not in O(1, n-1)")

    @property
    def n(self) -> int:
        return self.L.shape[0]

    @property
    def exact(self) -> bool:
        return is_exact(self.L)

    @classmethod
    def translation(cls, b) -> "MinkIsometry":
        b = as_array(b)
        return cls(identity(len(b), is_exact(b)), b)

    @classmethod
    def linear(cls, L) -> "MinkIsometry":
        L = as_array(L)
        zero = np.array([QSqrt2(0)] * L.shape[0], dtype=object) if is_exact(L) else np.zeros(L.shape[0])
        return cls(L, zero)

    def __call__(self, y):
        return self.L @ as_array(y) + self.b

    def __matmul__(self, other: "MinkIsometry") -> "MinkIsometry":
        return MinkIsometry(self.L @ other.L, self.L @ other.b + self.b)

    def inverse(self) -> "MinkIsometry":
        Li = inverse(self.L)
        return MinkIsometry(Li, -(Li @ self.b))

    def equals(self, other: "MinkIsometry", tol: float = 1e-10) -> bool:
        if self.exact and other.exact:
            return all(x == y for x, y in zip(self.L.flat, other.L.flat)) and \
                all(x == y for x, y in zip(self.b, other.b))
        return bool(np.max(np.abs(as_float(self.L) - as_float(other.L))) <= tol
                    and np.max(np.abs(as_float(self.b) - as_float(other.b))) <= tol)


@dataclass(frozen=True, eq=False)
class HpIsometry:
    """Half-pipe isometry ``[[A, 0], [v, eps]]``."""

    A: np.ndarray
    eps: int
    v: np.ndarray

    def __post_init__(self):
        A = as_array(self.A)
        v = as_array(self.v)
        if is_exact(A) != is_exact(v):
            A, v = as_float(A), as_float(v)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "v", v)
        if self.eps not in (1, -1):
            raise ValueError("eps must be +1 or -1")
        n = A.shape[0]
        J = minkowski_J(n, is_exact(A))
        res = A.T @ J @ A - J
        bad = any(res.flat) if is_exact(A) else np.max(np.abs(res)) > 1e-8 * max(
            1.0, float(np.max(np.abs(A))) ** 2)
        if bad or float(A[0, 0]) <= 0:
            raise GeometryError("A must lie in O_+(1, n-1)")

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def exact(self) -> bool:
        return is_exact(self.A)

    @property
    def matrix(self) -> np.ndarray:
        n = self.n
        if self.exact:
            M = np.empty((n + 1, n + 1), dtype=object)
            M[:n, :n] = self.A
            M[:n, n] = [QSqrt2(0)] * n
            M[n, :n] = self.v
            M[n, n] = QSqrt2(self.eps)
            return M
        M = np.zeros((n + 1, n + 1))
        M[:n, :n] = self.A
        M[n, :n] = self.v
        M[n, n] = self.eps
        return M

    def as_map(self) -> ProjectiveMap:
        return ProjectiveMap(self.matrix)

    @classmethod
    def from_matrix(cls, m, tol: float = 1e-8) -> "HpIsometry":
        """Read off ``(A, eps, v)`` from a matrix given up to positive scale."""
        M = as_array(m.matrix if isinstance(m, ProjectiveMap) else m)
        corner = M[-1, -1]
        if is_exact(M):
            if not corner:
                raise GeometryError("not a half-pipe matrix (zero corner)")
            M = np.array([[x / abs(corner) for x in row] for row in M], dtype=object)
            if any(M[:-1, -1]):
                raise GeometryError("not a half-pipe matrix (nonzero last column)")
            eps = corner.sign()
        else:
            if abs(corner) < tol:
                raise GeometryError("not a half-pipe matrix (zero corner)")
            M = M / abs(corner)
            if np.max(np.abs(M[:-1, -1]), initial=0.0) > tol:
                raise GeometryError("not a half-pipe matrix (nonzero last column)")
            eps = 1 if corner > 0 else -1
        return cls(M[:-1, :-1], eps, M[-1, :-1])

    def __matmul__(self, other: "HpIsometry") -> "HpIsometry":
        return HpIsometry.from_matrix(self.matrix @ other.matrix)

    def inverse(self) -> "HpIsometry":
        return HpIsometry.from_matrix(inverse(self.matrix))

    def equals(self, other, tol: float = 1e-12) -> bool:
        o = other.matrix if isinstance(other, HpIsometry) else other
        return projectively_equal(self.matrix.ravel(), as_array(o).ravel(), tol)


def mink_to_hp(m: MinkIsometry) -> HpIsometry:
    """``y -> L y + b`` with ``L = eps A`` goes to ``[[A, 0], [b^T J A, eps]]``."""
    L, b = m.L, m.b
    eps = 1 if float(L[0, 0]) > 0 else -1
    A = L if eps > 0 else -L
    J = minkowski_J(m.n, m.exact)
    return HpIsometry(A, eps, b @ J @ A)


def hp_to_mink(h: HpIsometry) -> MinkIsometry:
    """Inverse of :func:`mink_to_hp`: ``L = eps A``, ``b = A J v``."""
    J = minkowski_J(h.n, h.exact)
    L = h.A if h.eps > 0 else -h.A
    return MinkIsometry(L, h.A @ J @ h.v)


@dataclass(frozen=True, eq=False)
class HpPoint:
    """Point of ``HP^n``: unit future normal ``xbar`` and offset ``height``."""

    xbar: np.ndarray
    height: float

    def __post_init__(self):
        x = as_float(self.xbar)
        if x[0] <= 0 or abs(mink_norm(x) + 1.0) > 1e-9:
            raise GeometryError("xbar must lie on the upper sheet of H^{n-1}")
        object.__setattr__(self, "xbar", x)

    @property
    def coords(self) -> np.ndarray:
        return np.concatenate([self.xbar, [float(self.height)]])

    @classmethod
    def from_coords(cls, x) -> "HpPoint":
        x = as_float(x)
        s = math.sqrt(-mink_norm(x[:-1])) if mink_norm(x[:-1]) < 0 else None
        if s is None or x[0] <= 0:
            raise GeometryError("not a point of half-pipe space")
        return cls(x[:-1] / s, x[-1] / s)


def hp_point_to_plane(p: HpPoint):
    """The spacelike hyperplane ``{y : <xbar, y> = height}`` as ``(normal, offset)``."""
    return p.xbar.copy(), float(p.height)


def mink_point_to_hp_wall(w) -> DualHalfSpace:
    """Wall ``<w, xbar> - x_n`` of the hyperplanes through ``w``."""
    w = as_array(w)
    if is_exact(w):
        coeffs = [-w[0]] + list(w[1:]) + [QSqrt2(-1)]
        return DualHalfSpace(np.array(coeffs, dtype=object))
    return DualHalfSpace(np.concatenate([[-w[0]], w[1:], [-1.0]]))


def is_degenerate_wall(alpha) -> bool:
    """A half-pipe wall is degenerate when it contains the fibre direction ``e_n``."""
    a = alpha.coeffs if isinstance(alpha, DualHalfSpace) else as_array(alpha)
    last = a[-1]
    if isinstance(last, QSqrt2):
        return not last
    return abs(float(last)) <= 1e-12 * float(np.max(np.abs(as_float(a))))


def hp_walls_intersect(alpha, beta, tol: float = 1e-10) -> bool:
    """Whether two walls meet inside ``HP^n`` (not only at infinity).

    The common kernel must contain a vector whose first ``n`` coordinates
    are timelike; this is read off the restricted form on the kernel.
    """
    a = as_float(alpha.coeffs if isinstance(alpha, DualHalfSpace) else alpha)
    b = as_float(beta.coeffs if isinstance(beta, DualHalfSpace) else beta)
    K = nullspace(np.vstack([a, b]), tol=1e-12)
    n = a.shape[0] - 1
    J = np.diag([-1.0] + [1.0] * (n - 1) + [0.0])
    G = K @ J @ K.T
    return bool(np.min(np.linalg.eigvalsh(G)) < -tol)


@dataclass(frozen=True)
class HpClassification:
    """Result of :func:`classify_hp`.

    ``kind`` is ``identity``, ``nondegenerate_reflection``, ``hp_rotation``,
    ``degenerate_reflection`` or ``other``.  For rotations ``magnitude`` is
    the Minkowski length of the translation part, a convention of this
    library since no angle is canonically attached to a half-pipe rotation.
    """

    kind: str
    wall: Optional[DualHalfSpace] = None
    magnitude: Optional[float] = None
    parameter: Optional[float] = None
    translation: Optional[np.ndarray] = None
    linear: Optional[np.ndarray] = None
    convention: Optional[str] = None


def _close(a, b, tol):
    return float(np.max(np.abs(as_float(a) - as_float(b)))) <= tol


def classify_hp(h: HpIsometry, tol: Optional[float] = None) -> HpClassification:
    tol = config.resolve(tol)
    m = hp_to_mink(h)
    L, b = m.L, m.b
    n = m.n
    I = np.eye(n)
    bf = as_float(b)
    bnorm = float(np.linalg.norm(bf))
    scale = max(1.0, bnorm ** 2)
    if _close(L, I, tol):
        if bnorm <= tol:
            return HpClassification("identity", linear=L, translation=b)
        qb = float(mink_norm(b))
        if abs(qb) <= tol * scale:
            raise GeometryError("ambiguous classification: hp_rotation or other "
                                f"(translation {bf} is nearly lightlike)")
        if qb > 0:
            Jb = minkowski_J(n, is_exact(b)) @ b
            axis = np.concatenate([as_float(Jb), [0.0]])
            return HpClassification("hp_rotation", wall=DualHalfSpace(axis), magnitude=math.sqrt(qb),
                                    translation=b, linear=L,
                                    convention="magnitude = sqrt(q(b)) of the translation part")
        return HpClassification("other", translation=b, linear=L)
    if _close(L, -I, tol):
        half = b / 2 if not is_exact(b) else np.array([x / 2 for x in b], dtype=object)
        return HpClassification("nondegenerate_reflection", wall=mink_point_to_hp_wall(half),
                                translation=b, linear=L)
    # reflection in a timelike hyperplane: L = id - 2 n n^T J / q(n), n spacelike
    Lf = as_float(L)
    w, vecs = np.linalg.eig(Lf)
    minus = [k for k in range(n) if abs(w[k] + 1) <= 1e-8]
    plus = [k for k in range(n) if abs(w[k] - 1) <= 1e-8]
    if len(minus) == 1 and len(plus) == n - 1:
        nv = np.real(vecs[:, minus[0]])
        qn = float(mink_norm(nv))
        J = np.diag([-1.0] + [1.0] * (n - 1))
        if qn > tol and _close(Lf, I - 2 * np.outer(nv, nv) @ J / qn, 1e-8):
            nhat = nv / math.sqrt(qn)
            if nhat[np.argmax(np.abs(nhat))] < 0:
                nhat = -nhat
            s = float(_mink_pair(bf, nhat))
            if _close(bf, s * nhat, max(tol, 1e-9) * max(1.0, bnorm)):
                wall = DualHalfSpace(np.concatenate([J @ nhat, [0.0]]))
                return HpClassification("degenerate_reflection", wall=wall, parameter=s,
                                        translation=b, linear=L)
    return HpClassification("other", translation=b, linear=L)


def degenerate_reflection_family(normal, s) -> HpIsometry:
    """Member ``s`` of the one-parameter family of reflections in the
    degenerate wall determined by the timelike hyperplane ``normal^perp``.

    Linear part: Minkowski reflection in ``normal^perp``; translation part:
    ``s`` times the unit normal.
    """
    nv = as_array(normal)
    qn = mink_norm(nv)
    if float(qn) <= 0:
        raise GeometryError("the hyperplane must be timelike (spacelike normal)")
    n = nv.shape[0]
    exact = is_exact(nv)
    J = minkowski_J(n, exact)
    if exact:
        L = identity(n, True) - np.array([[2 * x / qn for x in row]
                                          for row in np.outer(nv, nv) @ J], dtype=object)
        try:
            from .qsqrt2 import exact_sqrt
            root = exact_sqrt(qn)
            b = np.array([QSqrt2.coerce(s) * x / root for x in nv], dtype=object)
            return mink_to_hp(MinkIsometry(L, b))
        except (ValueError, TypeError):
            L = as_float(L)
            nv = as_float(nv)
            qn = float(qn)
    else:
        L = np.eye(n) - 2 * np.outer(nv, nv) @ J / qn
    b = float(s) * as_float(nv) / math.sqrt(float(qn))
    return mink_to_hp(MinkIsometry(as_float(L), b))


def hp_translation_length_on_H1(h: HpIsometry) -> float:
    """Translation length ``arccosh(tr L / 2)`` of a boost of ``M^2`` on ``H^1``."""
    L = as_float(hp_to_mink(h).L)
    if L.shape != (2, 2):
        raise GeometryError("translation length on H^1 needs n = 2")
    tr = float(np.trace(L))
    det = float(np.linalg.det(L))
    if L[0, 0] <= 0 or abs(det - 1) > 1e-9 or tr <= 2 + 1e-12:
        raise GeometryError("linear part is not a boost")
    return math.acosh(tr / 2)
