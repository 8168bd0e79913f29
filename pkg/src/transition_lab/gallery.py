"""Catalog of named polytope families and face-pairing schemes.

Every family is centred at ``e0``.  Walls come from the bundled data file,
except for the exponentially deformed quadrilateral whose walls involve
``cosh``/``sinh`` and are built here numerically, and the cuboctahedron,
derived as the ``x4 = 0`` section of the four-dimensional family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Sequence, Tuple, Union

import numpy as np

from .forms import (
    DualHalfSpace, ProjectiveMap, ProjectivePoint, QuadraticForm, reflection_in_hyperplane,
)
from .linalg import as_float, identity, is_exact
from .param import DomainError, HalfSpaceFamily, Interval, family_eval, load_family_data
from .polytope import Polytope
from .qsqrt2 import QSqrt2

__all__ = [
    "FAMILIES", "SCHEMES", "UnknownNameError", "NumericWall", "FamilyRecord", "Pairing",
    "PairingScheme", "make_family", "exp_deform_vertices", "pairing_scheme",
    "recipe_matrix", "form_for",
]

FAMILIES = (
    "ideal_quadrilateral", "exp_quadrilateral", "ideal_octahedron", "oct_collapse",
    "quad_prime", "oct_prime", "hp_oct_limit", "ks_polytope", "eucl_parallelepiped",
    "cuboctahedron",
)

SCHEMES = (
    "torus_from_quadrilateral", "torus_from_quad_prime", "borromean_double",
    "three_torus_translations", "oct_prime_reflections",
)


class UnknownNameError(KeyError):
    pass


_FORMS = {
    "hyperbolic": QuadraticForm.hyperbolic,
    "spherical": QuadraticForm.spherical,
    "anti_de_sitter": QuadraticForm.anti_de_sitter,
    "half_pipe": QuadraticForm.half_pipe,
    "euclidean": QuadraticForm.euclidean,
}


def form_for(geometry: str, n: int) -> QuadraticForm:
    try:
        return _FORMS[geometry](n)
    except KeyError:
        raise ValueError(f"unknown geometry {geometry!r}") from None


@dataclass(frozen=True)
class NumericWall:
    """A wall given by a float-valued function of ``t``."""

    label: str
    func: Callable[[float], Sequence[float]]
    domain: Interval

    def evaluate(self, t) -> DualHalfSpace:
        if t not in self.domain:
            raise DomainError(f"t = {t} outside the domain {self.domain} of {self.label}")
        return DualHalfSpace(np.asarray(self.func(float(t)), dtype=float), label=self.label)


Wall = Union[HalfSpaceFamily, NumericWall]


@dataclass
class FamilyRecord:
    """A named family ``t -> Polytope``."""

    name: str
    dimension: int
    geometry: Dict[int, str]
    walls: List[Wall]
    domain: Interval
    provenance: str = ""
    pairings: Tuple[str, ...] = ()

    @property
    def labels(self) -> List[str]:
        return [w.label for w in self.walls]

    def wall_family(self, label: str) -> Wall:
        for w in self.walls:
            if w.label == label:
                return w
        raise KeyError(f"{self.name} has no wall {label!r}")

    def geometry_at(self, t) -> str:
        return self.geometry[1 if float(t) > 0 else -1]

    def form(self, t) -> QuadraticForm:
        return form_for(self.geometry_at(t), self.dimension)

    def walls_at(self, t) -> List[DualHalfSpace]:
        if t not in self.domain:
            raise DomainError(f"t = {t} outside the domain {self.domain} of {self.name}")
        out = []
        for w in self.walls:
            if isinstance(w, NumericWall):
                out.append(w.evaluate(t))
            else:
                try:
                    out.append(family_eval(w, t))
                except ValueError:
                    # a square root left Q(sqrt2); fall back to floats
                    return self.walls_at(float(t))
        return out

    def polytope(self, t) -> Polytope:
        walls = self.walls_at(t)
        exact = all(w.exact for w in walls)
        e0 = [QSqrt2(1)] + [QSqrt2(0)] * self.dimension if exact else \
            [1.0] + [0.0] * self.dimension
        return Polytope(self.form(t), walls, ProjectivePoint(np.array(e0, dtype=object if exact else float)),
                        name=self.name, geometry=self.geometry_at(t))


# -- deformed quadrilateral --------------------------------------------------

_A = math.sqrt(2) / 2
_QUAD_DIRS = {"right": (1, 0), "top": (0, 1), "left": (-1, 0), "bottom": (0, -1)}


def exp_deform_vertices(t: float, curvature: str = "hyp") -> List[ProjectivePoint]:
    """Points ``cosh(t) e0 + sinh(t) v_i`` (``cos``/``sin`` when spherical),
    ``v_i = (0, +-sqrt2/2, +-sqrt2/2)``, in counterclockwise order from the
    first quadrant."""
    t = float(t)
    if curvature == "hyp":
        if not t > 0:
            raise DomainError("hyperbolic deformation needs t > 0")
        # projective representative that stays finite for large t
        c, s = 1.0, math.tanh(t)
    elif curvature == "sph":
        if not 0 < t < math.pi:
            raise DomainError("spherical deformation needs 0 < t < pi")
        c, s = math.cos(t), math.sin(t)
    else:
        raise ValueError("curvature must be 'hyp' or 'sph'")
    signs = [(1, 1), (-1, 1), (-1, -1), (1, -1)]
    return [ProjectivePoint(np.array([c, s * a * _A, s * b * _A])) for a, b in signs]


def _exp_wall(label: str):
    dx, dy = _QUAD_DIRS[label]

    def func(t):
        if t > 0:
            c, s = 1.0, math.tanh(t)
        else:
            c, s = math.cos(-t), math.sin(-t)
        return [-s * _A, c * dx, c * dy]

    return NumericWall(label, func, Interval(-math.pi, math.inf, False, False))


def _exp_quadrilateral() -> FamilyRecord:
    walls = [_exp_wall(k) for k in ("right", "top", "left", "bottom")]
    return FamilyRecord(
        "exp_quadrilateral", 2, {1: "hyperbolic", -1: "spherical"}, walls,
        _PuncturedInterval(-math.pi, math.inf),
        "quadrilateral with vertices exp_e0(t v_i); hyperbolic for t > 0, "
        "spherical with parameter |t| for t < 0",
        ("torus_from_quadrilateral",))


class _PuncturedInterval(Interval):
    """Open interval with 0 removed."""

    def __init__(self, lo, hi):
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "lo_closed", False)
        object.__setattr__(self, "hi_closed", False)

    def __contains__(self, t) -> bool:
        return float(t) != 0 and Interval.__contains__(self, t)

    def __str__(self):
        return Interval.__str__(self) + " minus {0}"


# -- cross-section family ----------------------------------------------------

def _section_walls(walls: Sequence[HalfSpaceFamily], t) -> List[HalfSpaceFamily]:
    """Walls of the ``x_n = 0`` section, merging proportional restrictions."""
    from .param import ParamScalar
    merged: List[Tuple[str, DualHalfSpace]] = []
    for w in walls:
        coeffs = family_eval(w, t).coeffs[:-1]
        if not any(coeffs):
            continue
        h = DualHalfSpace(np.array(list(coeffs), dtype=object))
        for k, (lab, other) in enumerate(merged):
            if other.equals(h):
                merged[k] = (lab + "|" + w.label, other)
                break
        else:
            merged.append((w.label, h))
    out = []
    for lab, h in merged:
        cs = tuple(ParamScalar.const(c) for c in h.canonical())
        out.append(HalfSpaceFamily(lab, cs, Interval.parse("(-inf, inf)")))
    return out


# -- catalog -----------------------------------------------------------------

_PAIRINGS_OF = {
    "ideal_quadrilateral": ("torus_from_quadrilateral",),
    "quad_prime": ("torus_from_quad_prime",),
    "oct_collapse": ("borromean_double",),
    "oct_prime": ("oct_prime_reflections",),
    "eucl_parallelepiped": ("three_torus_translations",),
}


def make_family(name: str) -> FamilyRecord:
    """Build the named family; see :data:`FAMILIES`."""
    if name == "exp_quadrilateral":
        return _exp_quadrilateral()
    if name == "cuboctahedron":
        ks = make_family("ks_polytope")
        walls = _section_walls(ks.walls, Fraction(1, 2))
        return FamilyRecord("cuboctahedron", 3, {1: "hyperbolic", -1: "hyperbolic"}, walls,
                            Interval.parse("(-inf, inf)"),
                            "section x4 = 0 of ks_polytope; independent of t")
    data = load_family_data()
    if name not in data:
        raise UnknownNameError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")
    rec = data[name]
    return FamilyRecord(name, rec["dimension"], {1: rec["geometry"]["pos"], -1: rec["geometry"]["neg"]},
                        list(rec["walls"]), rec["domain"], rec["provenance"],
                        _PAIRINGS_OF.get(name, ()))


# -- pairing schemes ---------------------------------------------------------

Token = Tuple[str, object]


@dataclass(frozen=True)
class Pairing:
    """Identification of ``source`` wall of copy ``source_copy`` with
    ``target`` wall of copy ``target_copy``.

    ``recipe`` is a composition word read right to left, so
    ``(("flip", 1), ("refl", "right"))`` is the flip of ``x1`` after the
    reflection in ``right``.  The resulting map sends the polytope to its
    neighbour across the target wall, so the source half-space goes to the
    complement of the target half-space.
    """

    label: str
    source: str
    target: str
    recipe: Tuple[Token, ...]
    source_copy: int = 0
    target_copy: int = 0


@dataclass
class PairingScheme:
    name: str
    family: str
    pairings: Tuple[Pairing, ...]
    copies: int = 1
    provenance: str = ""

    def __getitem__(self, label: str) -> Pairing:
        for p in self.pairings:
            if p.label == label:
                return p
        raise KeyError(f"scheme {self.name} has no pairing {label!r}")

    @property
    def labels(self) -> List[str]:
        return [p.label for p in self.pairings]

    def record(self) -> FamilyRecord:
        return make_family(self.family)

    def matrix(self, label: str, t) -> np.ndarray:
        return recipe_matrix(self[label].recipe, self.record(), t)

    def check(self, t, tol: float = 1e-10) -> Dict[str, bool]:
        """Whether each recipe is an isometry sending source to the opposite of target."""
        rec = self.record()
        P = rec.polytope(t)
        out = {}
        for p in self.pairings:
            m = ProjectiveMap(recipe_matrix(p.recipe, rec, t))
            img = m.apply_dual(P.wall(p.source))
            ok = (-img).equals(P.wall(p.target), tol)
            ok = ok and _preserves(P.form, m.matrix, tol)
            out[p.label] = bool(ok)
        return out


def _preserves(form: QuadraticForm, M, tol: float) -> bool:
    M = as_float(M)
    if form.is_degenerate:
        from .transition import is_euclidean_block, is_hp_block
        return is_euclidean_block(M, 1e-8) if form.signs[0] == 0 else is_hp_block(M, 1e-8)
    J = np.diag(np.asarray(form.signs, dtype=float))
    scale = abs(np.linalg.det(M)) ** (1.0 / M.shape[0])
    Mn = M / scale
    return bool(np.max(np.abs(Mn.T @ J @ Mn - J)) <= max(tol, 1e-9))


def recipe_matrix(recipe: Sequence[Token], rec: FamilyRecord, t) -> np.ndarray:
    """Evaluate a recipe word at ``t`` (exact when the walls are exact)."""
    walls = dict(zip(rec.labels, rec.walls_at(t)))
    exact = all(w.exact for w in walls.values())
    dim = rec.dimension + 1
    M = identity(dim, exact)
    form = rec.form(t)
    for kind, arg in recipe:
        if kind == "flip":
            F = identity(dim, exact)
            F[arg, arg] = -F[arg, arg]
        elif kind == "refl":
            if arg not in walls:
                raise KeyError(f"{rec.name} has no wall {arg!r}")
            F = reflection_in_hyperplane(form, walls[arg]).matrix
            if is_exact(F) != exact:
                F = as_float(F)
                M = as_float(M)
        elif kind == "matrix":
            F = np.array(arg, dtype=object) if exact and is_exact(np.array(arg, dtype=object)) \
                else as_float(arg)
            if not is_exact(F):
                M = as_float(M)
        else:
            raise ValueError(f"unknown recipe token {kind!r}")
        M = M @ F
    return M


def _translation(w) -> np.ndarray:
    n = len(w)
    M = identity(n + 1, True)
    for i, x in enumerate(w):
        M[i + 1, 0] = QSqrt2.coerce(x)
    return M


def pairing_scheme(name: str) -> PairingScheme:
    """Build the named scheme; see :data:`SCHEMES`."""
    if name == "torus_from_quadrilateral":
        return PairingScheme(name, "exp_quadrilateral", (
            Pairing("a", "right", "left", (("flip", 1), ("refl", "right"))),
            Pairing("b", "top", "bottom", (("flip", 2), ("refl", "top"))),
        ), provenance="opposite sides glued by a flip composed with a side reflection")
    if name == "torus_from_quad_prime":
        return PairingScheme(name, "quad_prime", (
            Pairing("a", "right", "left", (("flip", 1), ("refl", "right"))),
            Pairing("b", "top", "bottom", (("flip", 2), ("refl", "top"))),
        ), provenance="same recipe on the collapsing quadrilateral")
    if name == "borromean_double":
        pairs = [
            Pairing("a0", "R1", "R3", (("flip", 1), ("refl", "R1")), 0, 0),
            Pairing("b0", "R2", "R4", (("flip", 2), ("refl", "R2")), 0, 0),
            Pairing("a1", "R1", "R3", (("flip", 1), ("refl", "R1")), 1, 1),
            Pairing("b1", "R2", "R4", (("flip", 2), ("refl", "R2")), 1, 1),
        ]
        pairs += [Pairing(f"d{i}", f"L{i}", f"L{i}", (("refl", f"L{i}"),), 0, 1) for i in range(1, 5)]
        return PairingScheme(name, "oct_collapse", tuple(pairs), copies=2,
                             provenance="right-column walls paired within each copy, "
                                        "left-column walls glued to the second copy")
    if name == "three_torus_translations":
        s2 = QSqrt2(0, 1)
        return PairingScheme(name, "eucl_parallelepiped", (
            Pairing("x", "x1-", "x1+", (("matrix", _translation([s2, 0, 0])),)),
            Pairing("y", "x2-", "x2+", (("matrix", _translation([0, s2, 0])),)),
            Pairing("z", "lower", "upper", (("matrix", _translation([0, 0, 2])),)),
        ), provenance="opposite faces identified by translations")
    if name == "oct_prime_reflections":
        labels = [f"{s}{i}" for i in range(1, 5) for s in ("L", "R")]
        return PairingScheme(name, "oct_prime", tuple(
            Pairing(f"r_{lab}", lab, lab, (("refl", lab),)) for lab in labels),
            provenance="reflection group of the collapsing octahedron")
    raise UnknownNameError(f"unknown pairing scheme {name!r}; choose from {', '.join(SCHEMES)}")
