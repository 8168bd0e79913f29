"""Polytopes given as finite intersections of half-spaces in a projective model.

The sizes met here are tiny (at most 22 walls in dimension 4), so vertices
are found by brute force: every ``n``-subset of walls is solved and the
feasible solutions are kept.  Ideal vertices (null vectors) are treated as
ordinary vertices.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog, minimize

from . import config
from .forms import (
    DegenerateHyperplaneError, DualHalfSpace, GeometryError, ProjectivePoint,
    QuadraticForm, canonical_vector, dual_pairing, eval_form,
)
from .linalg import as_float, is_exact, nullspace, rank
from .qsqrt2 import QSqrt2

__all__ = [
    "Polytope", "Vertex", "VertexSet", "AngleResult", "enumerate_vertices",
    "adjacency", "dihedral_angle", "wall_distance", "wall_distance_oracle",
    "orthonormal_basis", "cross_section", "gram_matrix", "gram_compare",
    "geometry_of_form", "angle_table", "flat_distance",
]

GEOMETRIES = ("hyperbolic", "spherical", "anti_de_sitter", "half_pipe", "euclidean")


def geometry_of_form(q: QuadraticForm) -> str:
    signs = q.signs
    if signs[0] == 0:
        return "euclidean"
    if signs[-1] == 0:
        return "half_pipe"
    neg = q.negative_count
    if neg == 0:
        return "spherical"
    if neg == 1:
        return "hyperbolic"
    if neg == 2:
        return "anti_de_sitter"
    raise ValueError(f"no model geometry for the form {q}")


@dataclass(frozen=True)
class Polytope:
    """Intersection of the half-spaces ``{alpha <= 0}`` of ``walls``."""

    form: QuadraticForm
    walls: Tuple[DualHalfSpace, ...]
    interior_point: ProjectivePoint
    name: Optional[str] = None
    geometry: Optional[str] = None

    def __post_init__(self):
        walls = tuple(self.walls)
        object.__setattr__(self, "walls", walls)
        if not isinstance(self.interior_point, ProjectivePoint):
            object.__setattr__(self, "interior_point", ProjectivePoint(self.interior_point))
        if self.geometry is None:
            object.__setattr__(self, "geometry", geometry_of_form(self.form))
        if all(s < 0 for s in self.form.signs):
            raise ValueError("negative definite forms do not define a model space")
        if not walls:
            raise ValueError("a polytope needs at least one wall")
        for w in walls:
            if w.coeffs.shape[0] != self.form.dim:
                raise ValueError(f"wall {w!r} has the wrong dimension")
        x = self.interior_point.coords
        xf = as_float(x)
        for w in walls:
            v = w(x)
            bad = v.sign() >= 0 if isinstance(v, QSqrt2) else v >= -1e-14 * (
                np.linalg.norm(as_float(w.coeffs)) * np.linalg.norm(xf))
            if bad:
                raise GeometryError(f"interior point is not strictly inside wall {w!r}")
        for i, j in itertools.combinations(range(len(walls)), 2):
            if walls[i].equals(walls[j]):
                raise GeometryError(f"walls {i} and {j} coincide: {walls[i]!r}")

    @property
    def n(self) -> int:
        return self.form.n

    @property
    def labels(self) -> List[str]:
        return [w.label if w.label is not None else str(i) for i, w in enumerate(self.walls)]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no wall labelled {label!r}") from None

    def wall(self, label: str) -> DualHalfSpace:
        return self.walls[self.index(label)]

    @property
    def exact(self) -> bool:
        return all(w.exact for w in self.walls)

    def contains(self, x, tol=None) -> bool:
        tol = config.resolve(tol)
        x = x.coords if isinstance(x, ProjectivePoint) else x
        xf = as_float(canonical_vector(x))
        return all(float(np.dot(as_float(w.canonical()), xf)) <= tol for w in self.walls)


@dataclass(frozen=True)
class Vertex:
    point: ProjectivePoint
    kind: str  # finite, ideal or hyperideal
    incident: FrozenSet[int]
    residual: float


@dataclass(frozen=True)
class VertexSet:
    vertices: Tuple[Vertex, ...]

    def _of(self, kind):
        return [v.point for v in self.vertices if v.kind == kind]

    @property
    def finite_vertices(self) -> List[ProjectivePoint]:
        return self._of("finite")

    @property
    def ideal_vertices(self) -> List[ProjectivePoint]:
        return self._of("ideal")

    @property
    def hyperideal_vertices(self) -> List[ProjectivePoint]:
        return self._of("hyperideal")

    @property
    def incidence(self) -> List[FrozenSet[int]]:
        return [v.incident for v in self.vertices]

    @property
    def max_residual(self) -> float:
        return max((v.residual for v in self.vertices), default=0.0)

    def __len__(self):
        return len(self.vertices)


def _classify_point(P: Polytope, x) -> str:
    if P.geometry == "spherical":
        return "finite"
    if P.geometry == "euclidean":
        x0 = x[0]
        zero = (not x0) if isinstance(x0, QSqrt2) else abs(x0) <= 1e-9
        return "ideal" if zero else "finite"
    val = eval_form(P.form, x)
    if isinstance(val, QSqrt2):
        s = val.sign()
    else:
        s = 0 if abs(val) <= 1e-9 else (1 if val > 0 else -1)
    return {-1: "finite", 0: "ideal", 1: "hyperideal"}[s]


def enumerate_vertices(P: Polytope, tol: Optional[float] = None) -> VertexSet:
    """All vertices of ``P``, found by solving every ``n``-subset of walls.

    Exact polytopes are handled exactly; otherwise a solution is feasible
    when every normalized wall is ``<= tol`` on its normalized coordinates.
    """
    tol = max(config.resolve(tol), 1e-12)
    n = P.n
    if not 2 <= n <= 4:
        raise ValueError(f"vertex enumeration supports 2 <= n <= 4, got n = {n}")
    if len(P.walls) > 32:
        raise ValueError("at most 32 walls are supported")
    exact = P.exact
    if exact:
        A = np.array([w.canonical() for w in P.walls], dtype=object)
    else:
        A = np.array([as_float(w.canonical()) for w in P.walls])
    m = len(P.walls)
    found: Dict[tuple, Vertex] = {}
    feas_tol = max(tol, 1e-9)
    for combo in itertools.combinations(range(m), n):
        sub = A[list(combo)]
        ker = nullspace(sub, tol=1e-12)
        if ker.shape[0] != 1:
            continue
        v = ker[0]
        for sgn in (1, -1):
            x = canonical_vector(v * sgn if not exact else np.array([c * sgn for c in v], dtype=object))
            if exact:
                vals = [sum((a * b for a, b in zip(row, x)), QSqrt2(0)) for row in A]
                if any(val.sign() > 0 for val in vals):
                    continue
                incident = frozenset(i for i, val in enumerate(vals) if not val)
                residual = 0.0
                key = tuple(x)
            else:
                vals = A @ x
                if np.any(vals > feas_tol):
                    continue
                incident = frozenset(int(i) for i in np.nonzero(np.abs(vals) <= feas_tol)[0])
                residual = float(np.max(np.abs(vals[list(incident)])))
                key = tuple(np.round(x, 7) + 0.0)
            if key in found:
                continue
            found[key] = Vertex(ProjectivePoint(x), _classify_point(P, x), incident, residual)
    verts = sorted(found.values(), key=lambda v: (v.kind, sorted(v.incident)))
    for v in verts:
        rows = A[sorted(v.incident)]
        if rank(rows if exact else as_float(rows), tol=1e-9) != n:
            raise GeometryError("non-simple degenerate configuration at walls "
                                f"{sorted(v.incident)}")
    return VertexSet(tuple(verts))


def adjacency(P: Polytope, V: Optional[VertexSet] = None) -> List[Tuple[int, int]]:
    """Wall pairs sharing a codimension-2 face."""
    if V is None:
        V = enumerate_vertices(P)
    n = P.n
    out = []
    for i, j in itertools.combinations(range(len(P.walls)), 2):
        pts = [v.point.coords for v in V.vertices if i in v.incident and j in v.incident]
        if not pts:
            continue
        M = np.array(pts, dtype=object) if is_exact(pts[0]) else np.array([as_float(p) for p in pts])
        if rank(M, tol=1e-9) == n - 1:
            out.append((i, j))
    return out


# -- angles and distances ----------------------------------------------------

@dataclass(frozen=True)
class AngleResult:
    """Relative position of two walls.

    ``kind`` is one of ``angle``, ``asymptotic``, ``ultraparallel``,
    ``timelike_separation`` or ``no_riemannian_angle``.  ``value`` holds the
    angle or distance when there is one; ``invariant`` is the raw dual
    pairing ``q*(alpha, beta)``.
    """

    kind: str
    value: Optional[float]
    c: Optional[float]
    invariant: float
    exact_right: bool = False
    same_wall: bool = False


def _dual_sign(q, a, tol):
    d = dual_pairing(q, a, a)
    if isinstance(d, QSqrt2):
        return d.sign(), d
    scale = float(np.dot(as_float(a), as_float(a)))
    if abs(d) <= tol * scale:
        return 0, d
    return (1 if d > 0 else -1), d


def dihedral_angle(q: QuadraticForm, alpha, beta, tol: Optional[float] = None) -> AngleResult:
    """Dihedral angle ``arccos(-c)`` with ``c`` the normalized dual pairing.

    ``|c| = 1`` is asymptotically parallel, ``|c| > 1`` ultraparallel at
    distance ``arccosh|c|``.  Two walls with negative dual square (spacelike
    walls of anti-de Sitter space) are separated by the timelike distance
    ``arccos(c)``.  Walls of mixed type get no angle.
    """
    tol = config.resolve(tol)
    a = alpha.coeffs if isinstance(alpha, DualHalfSpace) else np.asarray(alpha)
    b = beta.coeffs if isinstance(beta, DualHalfSpace) else np.asarray(beta)
    sa, da = _dual_sign(q, a, tol)
    sb, db = _dual_sign(q, b, tol)
    if sa == 0 or sb == 0:
        raise DegenerateHyperplaneError("degenerate wall has no dihedral angle")
    ab = dual_pairing(q, a, b)
    inv = float(ab)
    exact_zero = isinstance(ab, QSqrt2) and not ab
    same = bool(np.allclose(as_float(canonical_vector(a)), as_float(canonical_vector(b)), atol=tol))
    if sa != sb:
        return AngleResult("no_riemannian_angle", None, None, inv, exact_zero, same)
    c = inv / math.sqrt(float(da) * float(db))
    if sa < 0:
        if abs(c) <= 1 + tol:
            return AngleResult("timelike_separation", math.acos(max(-1.0, min(1.0, c))), c, inv,
                               exact_zero, same)
        return AngleResult("no_riemannian_angle", None, c, inv, exact_zero, same)
    if abs(abs(c) - 1) <= max(tol, 1e-12) and not exact_zero:
        return AngleResult("asymptotic", 0.0 if c < 0 else math.pi, c, inv, False, same)
    if abs(c) < 1:
        value = math.pi / 2 if exact_zero else math.acos(-c)
        return AngleResult("angle", value, c, inv, exact_zero, same)
    return AngleResult("ultraparallel", math.acosh(abs(c)), c, inv, False, same)


def wall_distance(q: QuadraticForm, alpha, beta, tol: Optional[float] = None) -> float:
    """Distance ``arccosh|c|`` between ultraparallel walls."""
    res = dihedral_angle(q, alpha, beta, tol)
    if res.kind != "ultraparallel":
        raise GeometryError(f"walls are not ultraparallel ({res.kind})")
    return res.value


def orthonormal_basis(q: QuadraticForm, h, tol: float = 1e-12) -> Tuple[np.ndarray, Tuple[int, ...]]:
    """``q``-orthonormal basis of ``ker h`` (rows) and the signs of its vectors.

    The standard basis is projected q-orthogonally onto ``ker h`` and run
    through Gram-Schmidt, timelike candidates first, so that simple slices
    keep simple coordinates.
    """
    if q.is_degenerate:
        raise DegenerateHyperplaneError("orthonormal frames need a non-degenerate form")
    hv = as_float(h.coeffs if isinstance(h, DualHalfSpace) else h)
    signs = np.asarray(q.signs, dtype=float)
    d = float(np.dot(signs * hv, hv))
    if abs(d) <= 1e-12 * float(np.dot(hv, hv)):
        raise DegenerateHyperplaneError("the slicing hyperplane is degenerate")
    normal = signs * hv
    cands = [np.eye(q.dim)[i] - (hv[i] / d) * normal for i in range(q.dim)]
    order = sorted(range(q.dim), key=lambda i: (np.dot(signs * cands[i], cands[i]) >= 0, i))
    basis, sig = [], []

    def accept(v):
        for b, s in zip(basis, sig):
            v = v - s * np.dot(signs * v, b) * b
        nv = float(np.dot(signs * v, v))
        if abs(nv) > tol * max(1.0, float(np.dot(v, v))) and float(np.dot(v, v)) > tol:
            basis.append(v / math.sqrt(abs(nv)))
            sig.append(1 if nv > 0 else -1)
            return True
        return False

    for i in order:
        if len(basis) == q.dim - 1:
            break
        accept(cands[i].copy())
    rng = np.random.default_rng(0)
    tries = 0
    while len(basis) < q.dim - 1 and tries < 100:
        tries += 1
        v = sum(rng.normal() * c for c in cands)
        accept(v)
    if len(basis) < q.dim - 1:
        raise GeometryError("could not build an orthonormal frame")
    # timelike vectors first, then the others, each group in discovery order
    idx = sorted(range(len(basis)), key=lambda k: (sig[k] > 0, k))
    B = np.array([basis[k] for k in idx])
    S = tuple(sig[k] for k in idx)
    # orient so that vectors have a positive leading nonzero coordinate
    for k in range(B.shape[0]):
        lead = next(x for x in B[k] if abs(x) > 1e-12)
        if lead < 0:
            B[k] = -B[k]
    return B, S


def _section_form(S):
    return QuadraticForm(tuple(S))


def _lp_max(c, A_ub, b_ub, A_eq, b_eq, bound):
    res = linprog(-np.asarray(c), A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                  bounds=[(-bound, bound)] * len(c), method="highs")
    if res.status != 0:
        return None, None
    return -res.fun, res.x


def cross_section(P: Polytope, h, tol: Optional[float] = None, bound: float = 100.0) -> Polytope:
    """Intersection of ``P`` with the hyperplane ``ker h`` as an ``(n-1)``-polytope.

    Walls are restricted to an orthonormal frame of ``ker h``; walls that
    vanish there are dropped, coincident restrictions are merged (labels
    joined with ``|``) and redundant ones removed by linear programming in
    an affine chart of the slice.
    """
    tol = config.resolve(tol)
    B, S = orthonormal_basis(P.form, h)
    hv = as_float(h.coeffs if isinstance(h, DualHalfSpace) else h)
    rows, labels = [], []
    for lab, w in zip(P.labels, P.walls):
        r = B @ as_float(w.coeffs)
        if np.max(np.abs(r)) <= 1e-9 * np.max(np.abs(as_float(w.coeffs))):
            continue
        r = r / np.max(np.abs(r))
        for k, prev in enumerate(rows):
            if np.max(np.abs(prev - r)) <= 1e-9:
                labels[k] = labels[k] + "|" + lab
                break
        else:
            rows.append(r)
            labels.append(lab)
    if not rows:
        raise GeometryError("no wall meets the slicing hyperplane")
    R = np.array(rows)
    # a point of the slice: project the interior point along the normal
    x = as_float(P.interior_point.coords)
    signs = np.asarray(P.form.signs, dtype=float)
    d = float(np.dot(signs * hv, hv))
    xp = x - (np.dot(hv, x) / d) * (signs * hv)
    y0 = np.array([s * np.dot(signs * xp, b) for b, s in zip(B, S)])
    chart = int(np.argmax(np.abs(y0)))
    csign = 1.0 if y0[chart] > 0 else -1.0
    dim = len(S)
    A_eq = np.zeros((1, dim))
    A_eq[0, chart] = 1.0
    b_eq = [csign]
    norms = np.linalg.norm(R, axis=1)
    # interior: maximize s with R y + s |R_i| <= 0
    c = np.zeros(dim + 1)
    c[-1] = 1.0
    A_ub = np.hstack([R, norms[:, None]])
    A_eq1 = np.hstack([A_eq, [[0.0]]])
    res = linprog(-c, A_ub=A_ub, b_ub=np.zeros(len(R)), A_eq=A_eq1, b_eq=b_eq,
                  bounds=[(-bound, bound)] * dim + [(None, 1.0)], method="highs")
    if res.status != 0 or -res.fun <= 1e-9:
        raise GeometryError("the section has empty interior")
    interior = res.x[:dim]
    keep = []
    for j in range(len(R)):
        others = [i for i in range(len(R)) if i != j]
        val, _ = _lp_max(R[j], R[others] if others else None,
                         np.zeros(len(others)) if others else None, A_eq, b_eq, bound)
        if val is None or val > max(tol, 1e-9) * norms[j]:
            keep.append(j)
    walls = tuple(DualHalfSpace(R[j], labels[j]) for j in keep)
    name = f"{P.name}|section" if P.name else None
    return Polytope(_section_form(S), walls, ProjectivePoint(interior), name=name)


# -- Gram matrices -----------------------------------------------------------

def gram_matrix(P: Polytope) -> np.ndarray:
    """Normalized dual pairings ``q*(a_i, a_j) / sqrt(|q*(a_i)| |q*(a_j)|)``."""
    W = np.array([as_float(w.coeffs) for w in P.walls])
    signs = np.asarray(P.form.signs, dtype=float)
    G = (W * signs) @ W.T
    d = np.sqrt(np.abs(np.diag(G)))
    d[d == 0] = 1.0
    return G / np.outer(d, d)


def gram_compare(P: Polytope, Q: Polytope, tol: float = 1e-10) -> Optional[Tuple[int, ...]]:
    """Permutation ``perm`` with ``G_P[i, j] == G_Q[perm[i], perm[j]]``, or ``None``."""
    if len(P.walls) != len(Q.walls):
        return None
    if sorted(P.form.signs) != sorted(Q.form.signs):
        return None
    GP, GQ = gram_matrix(P), gram_matrix(Q)
    m = len(P.walls)
    rowsP = [np.sort(np.round(GP[i], 8)) for i in range(m)]
    rowsQ = [np.sort(np.round(GQ[i], 8)) for i in range(m)]
    cand = [[j for j in range(m) if np.allclose(rowsP[i], rowsQ[j], atol=max(tol, 1e-8))]
            for i in range(m)]
    order = sorted(range(m), key=lambda i: len(cand[i]))
    perm = [-1] * m
    used = [False] * m

    def extend(k):
        if k == m:
            return True
        i = order[k]
        for j in cand[i]:
            if used[j]:
                continue
            ok = all(abs(GP[i, i2] - GQ[j, perm[i2]]) <= tol
                     for i2 in order[:k]) and abs(GP[i, i] - GQ[j, j]) <= tol
            if ok:
                perm[i] = j
                used[j] = True
                if extend(k + 1):
                    return True
                used[j] = False
                perm[i] = -1
        return False

    return tuple(perm) if extend(0) else None


def angle_table(P: Polytope, pairs: Optional[Sequence[Tuple[int, int]]] = None) -> List[dict]:
    """Dihedral data for the given wall pairs (default: all adjacent pairs)."""
    if pairs is None:
        pairs = adjacency(P)
    out = []
    for i, j in pairs:
        try:
            r = dihedral_angle(P.form, P.walls[i], P.walls[j])
            out.append({"walls": [P.labels[i], P.labels[j]], "kind": r.kind,
                        "value": r.value, "pairing": r.invariant, "exact_right": r.exact_right})
        except DegenerateHyperplaneError:
            out.append({"walls": [P.labels[i], P.labels[j]], "kind": "degenerate",
                        "value": None, "pairing": float(dual_pairing(P.form, P.walls[i], P.walls[j])),
                        "exact_right": False})
    return out


# -- numeric distance oracle -------------------------------------------------

def _hyperplane_chart(q: QuadraticForm, alpha):
    B, S = orthonormal_basis(q, alpha)
    if S.count(-1) != 1:
        raise GeometryError("the wall is not a hyperbolic hyperplane")
    p = B[0]
    if p[0] < 0:
        p = -p
    U = B[1:]

    def point(w):
        return math.sqrt(1.0 + float(np.dot(w, w))) * p + w @ U

    return point, U.shape[0]


def wall_distance_oracle(q: QuadraticForm, alpha, beta, seed: int = 0, starts: int = 4) -> float:
    """Hyperbolic distance between two hyperplanes by direct minimization.

    Points of each hyperplane are parametrized on the hyperboloid and
    ``-<x, y>`` is minimized with BFGS from a few seeded starts; the answer
    is ``arccosh`` of the minimum.  Independent of :func:`wall_distance`.
    """
    if geometry_of_form(q) != "hyperbolic":
        raise GeometryError("the distance oracle works in hyperbolic space only")
    px, kx = _hyperplane_chart(q, alpha)
    py, ky = _hyperplane_chart(q, beta)
    signs = np.asarray(q.signs, dtype=float)

    def f(z):
        x = px(z[:kx])
        y = py(z[kx:])
        return -float(np.dot(signs * x, y))

    rng = np.random.default_rng(seed)
    best = math.inf
    for _ in range(starts):
        z0 = rng.normal(scale=0.5, size=kx + ky)
        res = minimize(f, z0, method="BFGS", options={"gtol": 1e-12, "maxiter": 2000})
        best = min(best, res.fun)
    if best < 1.0:
        raise GeometryError("the hyperplanes intersect")
    return math.acosh(best)


def _flat_chart(q: QuadraticForm, walls):
    K = nullspace(np.vstack([as_float(w.coeffs if isinstance(w, DualHalfSpace) else w)
                             for w in walls]), tol=1e-12)
    J = np.diag(np.asarray(q.signs, dtype=float))
    w, V = np.linalg.eigh(K @ J @ K.T)
    if np.sum(w < -1e-12) != 1 or np.any(np.abs(w) <= 1e-12):
        raise GeometryError("the flat does not meet hyperbolic space in a totally geodesic copy")
    k = int(np.argmin(w))
    p = V[:, k] @ K / math.sqrt(-w[k])
    if p[0] < 0:
        p = -p
    U = np.array([V[:, i] @ K / math.sqrt(w[i]) for i in range(len(w)) if i != k]).reshape(-1, q.dim)

    def point(z):
        return math.sqrt(1.0 + float(np.dot(z, z))) * p + z @ U

    return point, U.shape[0]


def flat_distance(q: QuadraticForm, walls_a: Sequence, walls_b: Sequence, seed: int = 0,
                  starts: int = 4) -> float:
    """Hyperbolic distance between the flats cut out by two sets of walls.

    Used for the distance between two edges of a polyhedron.  Minimizes
    ``-<x, y>`` over both flats as in :func:`wall_distance_oracle`.
    """
    if geometry_of_form(q) != "hyperbolic":
        raise GeometryError("flat distances are computed in hyperbolic space only")
    px, kx = _flat_chart(q, walls_a)
    py, ky = _flat_chart(q, walls_b)
    signs = np.asarray(q.signs, dtype=float)

    def f(z):
        return -float(np.dot(signs * px(z[:kx]), py(z[kx:])))

    rng = np.random.default_rng(seed)
    best = math.inf
    for _ in range(starts):
        res = minimize(f, rng.normal(scale=0.5, size=kx + ky), method="BFGS",
                       options={"gtol": 1e-12, "maxiter": 2000})
        best = min(best, res.fun)
    return math.acosh(max(best, 1.0))
