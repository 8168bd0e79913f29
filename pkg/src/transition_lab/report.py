"""Deterministic reports for the command line: JSON and CSV emitters."""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from typing import List

import numpy as np

from .forms import DualHalfSpace, dual_pairing
from .gallery import NumericWall, make_family, pairing_scheme
from .linalg import as_float
from .param import NoLimitError, rescaled_limit
from .polytope import Polytope, adjacency, angle_table, enumerate_vertices, gram_matrix
from .qsqrt2 import QSqrt2

__all__ = [
    "canonical_json", "build_report", "limit_walls", "limit_report", "plot_rows",
    "write_plot_csv", "CSV_COLUMNS",
]

CSV_COLUMNS = ("object", "kind", "x0", "x1", "x2", "x3", "x4")
FLOAT_FORMAT = ".16e"  # 17 significant digits


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating, QSqrt2, Fraction)):
        return float(obj)
    return obj


def _dump(obj) -> str:
    if isinstance(obj, dict):
        items = sorted(obj.items())
        return "{" + ", ".join(json.dumps(k) + ": " + _dump(v) for k, v in items) + "}"
    if isinstance(obj, list):
        return "[" + ", ".join(_dump(v) for v in obj) + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if math.isnan(obj) or math.isinf(obj):
            return json.dumps(str(obj))
        return format(obj, FLOAT_FORMAT)
    return json.dumps(obj)


def canonical_json(obj) -> str:
    """Sorted keys, floats at 17 significant digits; stable under re-parsing."""
    return _dump(_plain(obj))


def _wall_entry(w: DualHalfSpace, exact: bool) -> dict:
    out = {"label": w.label, "coeffs": [float(c) for c in w.canonical()]}
    if exact and w.exact:
        out["exact"] = [str(c) for c in w.canonical()]
    return out


def _pairs_ok(P: Polytope, pairs, tol=1e-10):
    vals = [abs(float(dual_pairing(P.form, P.wall(a), P.wall(b)))) for a, b in pairs]
    return max(vals, default=0.0)


def _claims(name: str, P: Polytope, angles: List[dict], V) -> List[dict]:
    checks = []
    if name in ("ideal_octahedron", "cuboctahedron", "eucl_parallelepiped"):
        res = max((abs(a["value"] - math.pi / 2) if a["value"] is not None else math.inf
                   for a in angles), default=math.inf)
        checks.append({"name": "right_angles", "passed": res < 1e-12, "tol": 1e-12, "value": res,
                       "count": len(angles)})
    if name == "ideal_octahedron":
        a = math.sqrt(2) / 2
        expected = [[1, s1 * a, s2 * a, 0] for s1 in (1, -1) for s2 in (1, -1)] + \
                   [[1, 0, 0, 1], [1, 0, 0, -1]]
        got = [as_float(p.coords) / float(p.coords[0]) for p in V.ideal_vertices]
        match = len(got) == 6 and all(any(np.allclose(g, e, atol=1e-12) for g in got) for e in expected)
        checks.append({"name": "ideal_vertices", "passed": bool(match), "tol": 1e-12,
                       "value": len(got)})
    if name == "oct_prime":
        pairs = [(f"L{i}", f"R{i}") for i in range(1, 5)]
        v = _pairs_ok(P, pairs)
        checks.append({"name": "row_pair_orthogonality", "passed": v < 1e-10, "tol": 1e-10, "value": v})
    if name == "ks_polytope":
        pairs = [(f"p{i}", f"m{i}") for i in range(8)]
        v = _pairs_ok(P, pairs)
        checks.append({"name": "p_m_orthogonality", "passed": v < 1e-10, "tol": 1e-10, "value": v})
    return checks


def build_report(family: str, t, exact: bool = False) -> dict:
    """Vertices, adjacency, angles, Gram matrix and claim checks of a family at ``t``."""
    rec = make_family(family)
    if not exact:
        t = float(t)
    P = rec.polytope(t)
    V = enumerate_vertices(P)
    adj = adjacency(P, V)
    angles = angle_table(P, adj)
    labels = P.labels
    checks = [{"name": "vertex_residual", "passed": V.max_residual < 1e-12, "tol": 1e-12,
               "value": V.max_residual}]
    for sname in rec.pairings:
        sc = pairing_scheme(sname)
        if sc.family == family:
            res = sc.check(t)
            checks.append({"name": f"pairings:{sname}", "passed": all(res.values()), "tol": 1e-10,
                           "value": sorted(k for k, ok in res.items() if not ok)})
    checks += _claims(family, P, angles, V)
    return {
        "family": family,
        "t": str(t),
        "exact": bool(P.exact),
        "geometry": P.geometry,
        "form": str(P.form),
        "provenance": rec.provenance,
        "walls": [_wall_entry(w, exact) for w in P.walls],
        "vertices": [{"kind": v.kind, "coords": [float(c) for c in v.point.canonical()],
                      "walls": [labels[i] for i in sorted(v.incident)]} for v in V.vertices],
        "adjacency": [[labels[i], labels[j]] for i, j in adj],
        "angles": angles,
        "orthogonality": gram_matrix(P),
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }


def limit_walls(family: str, kind: str, side) -> List[DualHalfSpace]:
    """Rescaled limits of every wall of ``family`` from ``side``."""
    rec = make_family(family)
    out = []
    for w in rec.walls:
        if isinstance(w, NumericWall):
            raise NoLimitError(f"{family} has no closed-form walls; limits are available "
                               "for isometries only")
        lim = rescaled_limit(w, kind, side)
        out.append(DualHalfSpace(lim.coeffs, w.label))
    return out


def limit_report(family: str, kind: str, side) -> dict:
    rec = make_family(family)
    walls = limit_walls(family, kind, side)
    return {
        "family": family,
        "rescale": kind,
        "side": str(side),
        "provenance": rec.provenance,
        "walls": [{"label": w.label, "display": [str(c) for c in w.display()],
                   "coeffs": [float(c) for c in w.canonical()],
                   "degenerate_in_half_pipe": bool(kind == "eta" and not float(w.coeffs[-1]))}
                  for w in walls],
    }


def plot_rows(family: str, t) -> List[List[str]]:
    """CSV rows: walls as coefficient rows, vertices in the chart ``x0 = 1``.

    Vertices with ``x0 = 0`` are written unnormalized as ``vertex_at_infinity``.
    """
    rec = make_family(family)
    P = rec.polytope(float(t))
    V = enumerate_vertices(P)
    width = len(CSV_COLUMNS) - 2
    rows = []

    def pad(vals):
        vals = [format(float(v), FLOAT_FORMAT) for v in vals]
        return vals + [""] * (width - len(vals))

    for w in P.walls:
        rows.append([w.label, "wall"] + pad(as_float(w.canonical())))
    for k, v in enumerate(V.vertices):
        x = as_float(v.point.coords)
        if abs(x[0]) <= 1e-12:
            rows.append([f"v{k}", "vertex_at_infinity"] + pad(x))
        else:
            rows.append([f"v{k}", f"vertex_{v.kind}"] + pad(x / x[0]))
    return rows


def write_plot_csv(family: str, t, out) -> int:
    rows = plot_rows(family, t)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    writer.writerows(rows)
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())
    return len(rows)
