"""Holonomy of loops in pairing schemes, angle sums around edges and
detection of cone singularities."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .forms import GeometryError, ProjectiveMap
from .gallery import (
    FamilyRecord, NumericWall, PairingScheme, form_for, pairing_scheme, recipe_matrix,
)
from .halfpipe import HpIsometry, classify_hp
from .linalg import as_float, identity, inverse, is_exact
from .polytope import dihedral_angle
from .transition import IsometryPath, limit_conjugated_isometry, reflection_path

__all__ = [
    "LoopWord", "EdgeCycle", "Singularity", "holonomy", "recipe_limit", "cone_angle",
    "edge_cycle", "detect_singularity", "EDGE_CYCLES",
]


@dataclass(frozen=True)
class LoopWord:
    """A word in pairing labels; ``letters`` holds ``(label, +-1)`` pairs."""

    letters: Tuple[Tuple[str, int], ...] = ()

    def __post_init__(self):
        for lab, e in self.letters:
            if e not in (1, -1):
                raise ValueError(f"exponent of {lab!r} must be +1 or -1")

    @classmethod
    def parse(cls, text: str) -> "LoopWord":
        """Parse ``"a b a^-1 b^-1"`` (commas allowed); ``"[a,b]"`` is a commutator."""
        text = text.strip()
        m = re.fullmatch(r"\[\s*(\w+)\s*,\s*(\w+)\s*\]", text)
        if m:
            return cls.commutator(m.group(1), m.group(2))
        letters = []
        for tok in re.split(r"[\s,]+", text):
            if not tok:
                continue
            mm = re.fullmatch(r"(\w+?)(\^-1|\^1|\^\+1)?", tok)
            if not mm:
                raise ValueError(f"cannot parse letter {tok!r}")
            letters.append((mm.group(1), -1 if mm.group(2) == "^-1" else 1))
        return cls(tuple(letters))

    @classmethod
    def commutator(cls, x: str, y: str) -> "LoopWord":
        return cls(((x, 1), (y, 1), (x, -1), (y, -1)))

    def __mul__(self, other: "LoopWord") -> "LoopWord":
        return LoopWord(self.letters + other.letters)

    def inverse(self) -> "LoopWord":
        return LoopWord(tuple((lab, -e) for lab, e in reversed(self.letters)))

    def __str__(self):
        return " ".join(lab if e == 1 else f"{lab}^-1" for lab, e in self.letters)


def _scheme(scheme) -> PairingScheme:
    return pairing_scheme(scheme) if isinstance(scheme, str) else scheme


def recipe_limit(recipe: Sequence, rec: FamilyRecord, kind: str, side) -> ProjectiveMap:
    """Limit of the conjugated recipe, factor by factor."""
    dim = rec.dimension + 1
    forms = {s: form_for(rec.geometry[s], rec.dimension) for s in (1, -1)}
    M = None
    for tok, arg in recipe:
        if tok == "flip":
            F = identity(dim, True)
            F[arg, arg] = -F[arg, arg]
            F = ProjectiveMap(F)
        elif tok == "refl":
            wall = rec.wall_family(arg)
            if isinstance(wall, NumericWall):
                path = IsometryPath(lambda t, w=wall: recipe_matrix((("refl", w.label),), rec, t),
                                    name=f"reflection in {arg}")
            else:
                path = reflection_path(wall, forms)
            F = limit_conjugated_isometry(path, kind, side)
        elif tok == "matrix":
            const = arg
            F = limit_conjugated_isometry(IsometryPath(lambda t: as_float(const)), kind, side)
        else:
            raise ValueError(f"unknown recipe token {tok!r}")
        if M is None:
            M = F
        elif M.exact != F.exact:
            M = M.to_float() @ F.to_float()
        else:
            M = M @ F
    if M is None:
        return ProjectiveMap(identity(dim, True))
    return M


def holonomy(w: Union[LoopWord, str], scheme, t=None, limit: Optional[str] = None,
             side=None) -> ProjectiveMap:
    """Ordered product of the pairing matrices along ``w``.

    With ``limit`` set to ``gamma`` or ``eta`` each pairing is replaced by
    its rescaled limit from ``side`` and ``t`` is ignored.
    """
    w = LoopWord.parse(w) if isinstance(w, str) else w
    sc = _scheme(scheme)
    rec = sc.record()
    known = set(sc.labels)
    for lab, _ in w.letters:
        if lab not in known:
            raise KeyError(f"unresolved label {lab!r} in scheme {sc.name}")
    dim = rec.dimension + 1
    if limit is None and t is None:
        raise ValueError("t is required unless a limit is requested")
    cache = {}
    M = identity(dim, True)
    for lab, e in w.letters:
        if lab not in cache:
            if limit is None:
                cache[lab] = recipe_matrix(sc[lab].recipe, rec, t)
            else:
                cache[lab] = recipe_limit(sc[lab].recipe, rec, limit, side).matrix
        F = cache[lab] if e == 1 else inverse(cache[lab])
        if is_exact(M) != is_exact(F):
            M, F = as_float(M), as_float(F)
        M = M @ F
    return ProjectiveMap(M)


# -- angle sums --------------------------------------------------------------

@dataclass(frozen=True)
class EdgeCycle:
    """Corners around one edge class: entries ``(copy, wall_i, wall_j, reflex)``.

    A reflex corner contributes ``2 pi`` minus the dihedral angle.
    """

    entries: Tuple[Tuple[int, str, str, bool], ...]
    name: str = ""


EDGE_CYCLES = ("quadrilateral_puncture", "borromean_edge", "parallelepiped_edge")


def edge_cycle(name: str, t=None) -> Tuple[EdgeCycle, str]:
    """Named edge cycle and the scheme it lives in.

    The Borromean cycle depends on the sign of ``t``: on the spherical side
    the collapsing edges are reflex.
    """
    if name == "quadrilateral_puncture":
        walls = ["right", "top", "left", "bottom"]
        ents = tuple((0, walls[k], walls[(k + 1) % 4], False) for k in range(4))
        return EdgeCycle(ents, name), "torus_from_quadrilateral"
    if name == "borromean_edge":
        reflex = t is not None and float(t) < 0
        return EdgeCycle(((0, "L1", "L3", reflex), (1, "L1", "L3", reflex)), name), "borromean_double"
    if name == "parallelepiped_edge":
        ents = ((0, "x1+", "x2+", False), (0, "x2+", "x1-", False),
                (0, "x1-", "x2-", False), (0, "x2-", "x1+", False))
        return EdgeCycle(ents, name), "three_torus_translations"
    raise KeyError(f"unknown edge cycle {name!r}; choose from {', '.join(EDGE_CYCLES)}")


def cone_angle(cycle: EdgeCycle, scheme, t) -> float:
    """Sum of the dihedral angles of the copies around the edge."""
    sc = _scheme(scheme)
    rec = sc.record()
    P = rec.polytope(t)
    total = 0.0
    for copy, wi, wj, reflex in cycle.entries:
        if not 0 <= copy < sc.copies:
            raise ValueError(f"copy {copy} out of range for {sc.name}")
        res = dihedral_angle(P.form, P.wall(wi), P.wall(wj))
        if res.kind not in ("angle", "asymptotic"):
            raise GeometryError(f"undefined angle between {wi} and {wj}: {res.kind}")
        total += (2 * math.pi - res.value) if reflex else res.value
    return total


# -- singularities -----------------------------------------------------------

@dataclass(frozen=True)
class Singularity:
    """``kind`` is ``trivial``, ``cone`` or ``other``."""

    kind: str
    angle: Optional[float] = None
    magnitude: Optional[float] = None
    detail: str = ""


def _normalized(M: np.ndarray) -> np.ndarray:
    d = float(np.linalg.det(M))
    if d == 0:
        raise GeometryError("singular matrix")
    return M / abs(d) ** (1.0 / M.shape[0])


def detect_singularity(h, geometry: str, tol: float = 1e-9) -> Singularity:
    """Classify a holonomy as trivial, a cone-type rotation, or other.

    Riemannian and anti-de Sitter cases read the rotation angle from the
    unit complex eigenvalues; half-pipe elements go through
    :func:`classify_hp`, whose magnitude is a length convention.
    """
    M = as_float(h.matrix if isinstance(h, ProjectiveMap) else h)
    if ProjectiveMap(M).is_identity(tol):
        return Singularity("trivial")
    if geometry == "hp":
        try:
            c = classify_hp(HpIsometry.from_matrix(M), tol)
        except GeometryError as exc:
            return Singularity("other", detail=str(exc))
        if c.kind == "identity":
            return Singularity("trivial")
        if c.kind == "hp_rotation":
            return Singularity("cone", magnitude=c.magnitude, detail=c.convention or "")
        return Singularity("other", detail=c.kind)
    if geometry not in ("hyp", "eucl", "sph", "ads"):
        raise ValueError(f"unknown geometry {geometry!r}")
    N = _normalized(M)
    if np.linalg.det(N) < 0:
        return Singularity("other", detail="orientation reversing")
    if geometry == "eucl":
        if abs(N[0, 0]) < tol:
            return Singularity("other", detail="does not preserve the affine chart")
        N = N / N[0, 0]
        w = np.linalg.eigvals(N[1:, 1:])
    else:
        w = np.linalg.eigvals(N)
    rot = [z for z in w if abs(abs(z) - 1) <= 1e-7 and abs(z.imag) > 1e-7]
    real_ok = all(abs(z.imag) <= 1e-7 and abs(abs(z) - 1) <= 1e-7 for z in w if z not in rot)
    if len(rot) == 2 and real_ok:
        angle = abs(math.atan2(rot[0].imag, rot[0].real))
        return Singularity("cone", angle=angle)
    return Singularity("other", detail="eigenvalues " + ", ".join(f"{z:.6g}" for z in w))
