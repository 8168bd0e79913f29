"""Command line driver.

Exit codes: 0 success, 1 a check failed, 2 usage error, 3 internal error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import List, Optional

import numpy as np

from .forms import GeometryError
from .gallery import FAMILIES, SCHEMES, make_family, pairing_scheme
from .holonomy import EDGE_CYCLES, detect_singularity, holonomy
from .linalg import as_float
from .param import DomainError, NoLimitError
from .report import build_report, canonical_json, limit_report, write_plot_csv

__all__ = ["main", "run", "build_parser", "UsageError"]


class UsageError(Exception):
    pass


def _parse_t(text: str, exact: bool):
    text = text.strip()
    try:
        if exact:
            return Fraction(text)
        if "/" in text:
            return float(Fraction(text))
        return float(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot read t = {text!r}; use a decimal or a fraction like 1/2") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="transition-lab",
                                description="Polytope families across geometric transitions.")
    p.add_argument("--seed", type=int, default=0, help="seed for sampling oracles (default 0)")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list families, pairing schemes and edge cycles")

    c = sub.add_parser("check", help="report vertices, angles and checks of a family")
    c.add_argument("family")
    c.add_argument("--t", required=True)
    c.add_argument("--exact", action="store_true", help="exact arithmetic in Q(sqrt2)")
    c.add_argument("--json", metavar="PATH", help="also write the report to PATH")

    lim = sub.add_parser("limit", help="rescaled limits of the walls of a family")
    lim.add_argument("family")
    lim.add_argument("--rescale", choices=("gamma", "eta"), required=True)
    lim.add_argument("--side", choices=("pos", "neg"), default="pos")
    lim.add_argument("--json", metavar="PATH")

    h = sub.add_parser("holonomy", help="holonomy of a loop in a pairing scheme")
    h.add_argument("scheme")
    h.add_argument("--t", help="parameter value (omit with --limit)")
    h.add_argument("--loop", default=None, help="word such as '[a,b]' or 'a b a^-1'")
    h.add_argument("--limit", choices=("gamma", "eta"), default=None)
    h.add_argument("--side", choices=("pos", "neg"), default="pos")
    h.add_argument("--geometry", choices=("hyp", "eucl", "sph", "ads", "hp"), default=None)

    sub.add_parser("suite", help="run the acceptance suite")

    pl = sub.add_parser("plot", help="write wall and vertex data as CSV")
    pl.add_argument("family")
    pl.add_argument("--t", required=True)
    pl.add_argument("--chart", choices=("x0",), default="x0")
    pl.add_argument("--out", required=True)
    return p


def _cmd_list(args, out) -> int:
    out("families: " + ", ".join(FAMILIES))
    out("schemes: " + ", ".join(SCHEMES))
    out("edge cycles: " + ", ".join(EDGE_CYCLES))
    return 0


def _cmd_check(args, out) -> int:
    make_family(args.family)
    t = _parse_t(args.t, args.exact)
    rep = build_report(args.family, t, exact=args.exact)
    text = canonical_json(rep)
    out(text)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return 0 if rep["passed"] else 1


def _cmd_limit(args, out) -> int:
    rep = limit_report(args.family, args.rescale, args.side)
    out(f"# {rep['family']}: {args.rescale}-rescaled limit from the {args.side} side")
    out(f"# {rep['provenance']}")
    for w in rep["walls"]:
        flag = "  degenerate" if w["degenerate_in_half_pipe"] else ""
        out(f"{w['label']:<8} ({' : '.join(w['display'])}){flag}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(canonical_json(rep) + "\n")
    return 0


_GEOMETRY_CODES = {"hyperbolic": "hyp", "spherical": "sph", "anti_de_sitter": "ads",
                   "euclidean": "eucl", "half_pipe": "hp"}


def _cmd_holonomy(args, out) -> int:
    sc = pairing_scheme(args.scheme)
    word = args.loop or (f"[{sc.labels[0]},{sc.labels[1]}]" if len(sc.labels) > 1 else sc.labels[0])
    if args.limit is None:
        if args.t is None:
            raise UsageError("--t is required unless --limit is given")
        t = _parse_t(args.t, False)
        H = holonomy(word, sc, t)
        geom = args.geometry or _GEOMETRY_CODES[sc.record().geometry_at(t)]
    else:
        H = holonomy(word, sc, limit=args.limit, side=args.side)
        geom = args.geometry or ("hp" if args.limit == "eta" else "eucl")
    sing = detect_singularity(H, geom)
    M = as_float(H.matrix)
    M = M / abs(np.linalg.det(M)) ** (1.0 / M.shape[0])
    rep = {"scheme": sc.name, "loop": word, "t": args.t, "limit": args.limit,
           "side": args.side if args.limit else None, "geometry": geom, "matrix": M,
           "singularity": {"kind": sing.kind, "angle": sing.angle, "magnitude": sing.magnitude,
                           "detail": sing.detail}}
    out(canonical_json(rep))
    return 0


def _cmd_suite(args, out) -> int:
    from .acceptance import run_all
    results = run_all(out, seed=args.seed)
    failed = [r for r in results if not r.passed]
    out(f"{len(results) - len(failed)}/{len(results)} passed")
    return 1 if failed else 0


def _cmd_plot(args, out) -> int:
    make_family(args.family)
    n = write_plot_csv(args.family, _parse_t(args.t, False), args.out)
    out(f"wrote {n} rows to {args.out}")
    return 0


_COMMANDS = {"list": _cmd_list, "check": _cmd_check, "limit": _cmd_limit,
             "holonomy": _cmd_holonomy, "suite": _cmd_suite, "plot": _cmd_plot}


def run(argv: Optional[List[str]] = None, out=print, err=None) -> int:
    err = err or (lambda s: print(s, file=sys.stderr))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return _COMMANDS[args.command](args, out)
    except (UsageError, KeyError, DomainError) as exc:
        err(f"error: {exc.args[0] if exc.args else exc}")
        return 2
    except (GeometryError, NoLimitError) as exc:
        err(f"check failed: {exc}")
        return 1
    except Exception as exc:  # noqa: BLE001
        err(f"internal error: {type(exc).__name__}: {exc}")
        return 3


def main() -> None:
    sys.exit(run())
