"""Rescaling maps and limits of rescaled objects.

``gamma_t = diag(1, 1/t, ..., 1/t)`` zooms in around ``e0`` and produces
Euclidean space as a limit of hyperbolic or spherical space;
``eta_t = diag(1, ..., 1, 1/t)`` stretches only the last direction and
produces half-pipe space from hyperbolic or anti-de Sitter space.  On the
negative side of a transition the rescaling is always taken at ``|t|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Sequence

import numpy as np

from .forms import (
    GeometryError, ProjectiveMap, ProjectivePoint, QuadraticForm, canonical_matrix,
    canonical_vector, reflection_in_hyperplane,
)
from .linalg import as_float
from .param import (
    LIMIT_SCHEDULE, HalfSpaceFamily, ParamScalar, family_eval, _side,
)

__all__ = [
    "RescalingMap", "IsometryPath", "NoTransitionalLimit", "rescale_point",
    "conjugate", "reflection_path", "limit_conjugated_isometry",
    "surface_limit_check", "is_hp_block", "is_euclidean_block",
]


class NoTransitionalLimit(GeometryError):
    pass


@dataclass(frozen=True)
class RescalingMap:
    """``gamma`` or ``eta`` at parameter ``t`` acting on ``R^{n+1}``."""

    kind: str
    t: float
    n: int

    def __post_init__(self):
        if self.kind not in ("gamma", "eta"):
            raise ValueError(f"unknown rescaling {self.kind!r}; use 'gamma' or 'eta'")
        if self.t == 0:
            raise ValueError("rescaling is undefined at t = 0")
        if self.n < 1:
            raise ValueError("dimension must be positive")

    def diagonal(self) -> np.ndarray:
        d = np.ones(self.n + 1)
        if self.kind == "gamma":
            d[1:] = 1.0 / self.t
        else:
            d[-1] = 1.0 / self.t
        return d

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.diagonal())

    def as_map(self) -> ProjectiveMap:
        return ProjectiveMap(self.matrix)


def rescale_point(r: RescalingMap, x) -> ProjectivePoint:
    coords = x.coords if isinstance(x, ProjectivePoint) else np.asarray(x, dtype=float)
    return ProjectivePoint(canonical_vector(r.diagonal() * as_float(coords)))


def conjugate(r: RescalingMap, m) -> np.ndarray:
    """``R M R^{-1}`` for diagonal ``R``."""
    M = as_float(m.matrix if isinstance(m, ProjectiveMap) else m)
    d = r.diagonal()
    return (d[:, None] * M) / d[None, :]


class IsometryPath:
    """A path ``t -> M(t)`` of isometries on a punctured neighborhood of 0.

    ``func`` evaluates the path numerically.  ``symbolic`` optionally maps a
    side (+1 or -1) to a matrix of :class:`ParamScalar` entries that equals
    the path up to a positive scalar on that side; when present it drives
    exact limit extraction.
    """

    def __init__(self, func: Callable[[float], np.ndarray],
                 symbolic: Optional[Dict[int, Sequence[Sequence[ParamScalar]]]] = None,
                 name: str = ""):
        self.func = func
        self.symbolic = symbolic or {}
        self.name = name

    def __call__(self, t) -> np.ndarray:
        m = self.func(t)
        return as_float(m.matrix if isinstance(m, ProjectiveMap) else m)


def _dual_square(form: QuadraticForm, coeffs: Sequence[ParamScalar]) -> ParamScalar:
    out = None
    for s, c in zip(form.signs, coeffs):
        if s == 0:
            continue
        term = c * c if s > 0 else -(c * c)
        out = term if out is None else out + term
    return out


def reflection_path(wall: HalfSpaceFamily, forms: Dict[int, QuadraticForm]) -> IsometryPath:
    """Reflections in a family of walls, with the form chosen by the sign of ``t``.

    The symbolic representative is ``sign(d) (d id - 2 J a a^T)`` with
    ``d = q*(a, a)``, a positive multiple of the reflection.
    """

    def func(t):
        form = forms[1 if t > 0 else -1]
        return reflection_in_hyperplane(form, family_eval(wall, t)).matrix

    symbolic = {}
    for side, form in forms.items():
        coeffs = wall.coeffs_for(side)
        d = _dual_square(form, coeffs)
        v = d.series(side).valuation()
        if v is None:
            continue
        sgn = d.series(side).coeff(v).sign() * (side ** v if v % 2 else 1)
        dim = len(coeffs)
        rows = []
        for i in range(dim):
            row = []
            for j in range(dim):
                e = -(ParamScalar.const(2 * form.signs[i]) * coeffs[i] * coeffs[j])
                if i == j:
                    e = d + e
                row.append(e if sgn > 0 else -e)
            rows.append(row)
        symbolic[side] = rows
    return IsometryPath(func, symbolic, name=f"reflection in {wall.label}")


def _exponents(kind: str, dim: int):
    # R = diag(|t|^e_i)
    e = [0] * dim
    if kind == "gamma":
        for i in range(1, dim):
            e[i] = -1
    else:
        e[-1] = -1
    return e


def _symbolic_limit(rows, kind: str, side: int) -> np.ndarray:
    dim = len(rows)
    e = _exponents(kind, dim)
    series = []
    for i in range(dim):
        srow = []
        for j in range(dim):
            k = e[i] - e[j]
            srow.append(rows[i][j].series(side).shift(k) * (side ** abs(k)))
        series.append(srow)
    vals = [s.valuation() for row in series for s in row]
    known = [v for v in vals if v is not None]
    if not known:
        raise NoTransitionalLimit("no transitional limit: path vanishes to known order")
    v = min(known)
    out = np.empty((dim, dim), dtype=object)
    sign = side ** (abs(v) % 2)
    for i in range(dim):
        for j in range(dim):
            out[i, j] = series[i][j].coeff(v) * sign
    return canonical_matrix(out)


def _numeric_limit(p: IsometryPath, kind: str, side: int):
    mats = []
    for h in LIMIT_SCHEDULE:
        M = p(side * h)
        r = RescalingMap(kind, h, M.shape[0] - 1)
        mats.append(canonical_matrix(conjugate(r, M)))
    d1 = float(np.max(np.abs(mats[0] - mats[1])))
    d2 = float(np.max(np.abs(mats[1] - mats[2])))
    return mats[-1], d1, d2


def limit_conjugated_isometry(p: IsometryPath, r_kind: str, side, tol: float = 1e-8) -> ProjectiveMap:
    """Limit of ``r(|t|) p(t) r(|t|)^{-1}`` as ``t -> 0`` from ``side``.

    Numerically the conjugates at ``|t| = 1e-3, 1e-4, 1e-5`` must contract
    (successive differences shrinking at least 5x).  A symbolic path
    overrides the numeric estimate, after checking that the two agree.
    """
    s = _side(side)
    est, d1, d2 = _numeric_limit(p, r_kind, s)
    converging = d1 <= 1e-13 or d2 <= d1 / 5.0
    if s in p.symbolic:
        exact = _symbolic_limit(p.symbolic[s], r_kind, s)
        if np.max(np.abs(as_float(exact) - est)) > max(tol, 10 * d2):
            raise NoTransitionalLimit(
                f"no transitional limit: symbolic and sampled limits of {p.name} disagree")
        return ProjectiveMap(exact)
    if not converging or not np.all(np.isfinite(est)):
        raise NoTransitionalLimit(
            f"no transitional limit for {p.name or 'path'}: differences {d1:.3e}, {d2:.3e}")
    return ProjectiveMap(est)


def is_hp_block(m, tol: float = 1e-8) -> bool:
    """Block shape ``[[A, 0], [v, +-1]]`` with ``A`` in ``O_+(1, n-1)``."""
    M = as_float(m.matrix if isinstance(m, ProjectiveMap) else m)
    corner = M[-1, -1]
    if abs(corner) < tol:
        return False
    M = M / abs(corner)
    if np.max(np.abs(M[:-1, -1]), initial=0.0) > tol:
        return False
    A = M[:-1, :-1]
    J = np.diag([-1.0] + [1.0] * (A.shape[0] - 1))
    return bool(np.max(np.abs(A.T @ J @ A - J)) <= tol and A[0, 0] > 0
                and abs(abs(M[-1, -1]) - 1) <= tol)


def is_euclidean_block(m, tol: float = 1e-8) -> bool:
    """Affine isometry of the chart ``x0 = 1``: first row ``(1, 0, ..., 0)``,
    orthogonal linear part."""
    M = as_float(m.matrix if isinstance(m, ProjectiveMap) else m)
    if abs(M[0, 0]) < tol:
        return False
    M = M / M[0, 0]
    if np.max(np.abs(M[0, 1:])) > tol:
        return False
    L = M[1:, 1:]
    return bool(np.max(np.abs(L.T @ L - np.eye(L.shape[0]))) <= tol)


# -- rescaled model surfaces -------------------------------------------------

_SURFACES = {("H", "gamma"): 1, ("S", "gamma"): -1, ("H", "eta"): 1, ("AdS", "eta"): -1}


def surface_limit_check(model: str, r_kind: str, t: float, samples: int = 200,
                        seed: int = 0, n: int = 2) -> float:
    """Max distance from the rescaled model surface to its limit locus.

    Sample points are drawn (seeded) in a fixed window of the limit locus:
    the plane ``x0 = 1`` for ``gamma`` (window ``|x| <= 1``), the cylinder
    ``-x0^2 + ... + x_{n-1}^2 = -1`` for ``eta`` (window ``|xbar| <= 1``,
    ``|x_n| <= 1``).  Each is matched with the point of the rescaled surface
    above it, and the largest gap is returned.  The gap is ``O(t^2)``.
    """
    key = (model, r_kind)
    if key not in _SURFACES:
        raise ValueError(f"unsupported combination {model}/{r_kind}; "
                         f"choose from {sorted(_SURFACES)}")
    if t == 0:
        raise ValueError("t must be nonzero")
    if samples < 1:
        raise ValueError("need at least one sample")
    eps = _SURFACES[key]
    rng = np.random.default_rng(seed)
    t2 = float(t) ** 2
    worst = 0.0
    for _ in range(samples):
        if r_kind == "gamma":
            y = rng.uniform(-1, 1, size=n)
            y = y / max(1.0, float(np.linalg.norm(y)))
            # point of gamma_t(model) above (1, y): x0 = sqrt(1 -+ t^2 |y|^2)
            x0 = math.sqrt(1.0 + eps * t2 * float(np.dot(y, y)))
            gap = abs(x0 - 1.0)
        else:
            w = rng.uniform(-1, 1, size=n - 1)
            w = w / max(1.0, float(np.linalg.norm(w)))
            xbar = np.concatenate([[math.sqrt(1.0 + float(np.dot(w, w)))], w])
            h = rng.uniform(-1, 1)
            lam = math.sqrt(1.0 + eps * t2 * h * h)
            gap = abs(lam - 1.0) * float(np.linalg.norm(xbar))
        worst = max(worst, gap)
    return worst
