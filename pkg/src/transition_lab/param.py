"""Closed-form wall coefficients depending on the transition parameter ``t``.

A :class:`ParamScalar` is an expression tree over a fixed set of atoms

    ``t``, ``|t|``, ``t^2``, ``sqrt[1+t^2]``, ``sqrt[1-t^2]``

and constants in Q(sqrt 2), closed under ``+``, ``-`` and ``*``.  Trees can be
evaluated in floating point or exactly (at rational ``t``), and expanded as
truncated Laurent series around ``t = 0`` from either side.  The series are
what makes rescaled limits exact: the leading order of every coordinate is
read off with exact coefficients, so cancellation at tiny ``t`` can never
produce a false limit.

The prefix syntax used by the family data file is a tiny s-expression
language::

    (* -1 sqrt2 |t|)      # -sqrt(2)|t|
    (- t)                 # -t
    (+ 1 t^2)
    sqrt[1+t^2]
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .forms import DualHalfSpace, GeometryError, canonical_vector
from .linalg import as_float
from .qsqrt2 import QSqrt2, SQRT2, exact_sqrt

__all__ = [
    "ParamScalar", "parse", "Series", "Interval", "HalfSpaceFamily",
    "DomainError", "NoLimitError", "family_eval", "dual_rescale",
    "rescaled_limit", "load_family_data", "ATOMS", "LIMIT_SCHEDULE",
]

ATOMS = ("t", "|t|", "t^2", "sqrt[1+t^2]", "sqrt[1-t^2]")
LIMIT_SCHEDULE = (1e-3, 1e-4, 1e-5)
SERIES_ORDER = 8


class DomainError(ValueError):
    """Parameter outside the declared domain of a family."""


class NoLimitError(GeometryError):
    pass


# -- truncated Laurent series -------------------------------------------------

class Series:
    """Truncated Laurent series ``sum c_k t^(start+k)`` known modulo ``t^prec``."""

    __slots__ = ("start", "coeffs", "prec")

    def __init__(self, start: int, coeffs: Sequence, prec: int):
        self.start = start
        self.coeffs = [QSqrt2.coerce(c) for c in coeffs][: max(0, prec - start)]
        self.prec = prec

    @classmethod
    def constant(cls, c, prec: int = SERIES_ORDER) -> "Series":
        return cls(0, [c], prec)

    def coeff(self, power: int) -> QSqrt2:
        if power >= self.prec:
            raise NoLimitError(f"coefficient of t^{power} unknown (precision {self.prec})")
        k = power - self.start
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return QSqrt2(0)

    def valuation(self) -> Optional[int]:
        """Power of the first nonzero known term, or ``None``."""
        for k, c in enumerate(self.coeffs):
            if c and self.start + k < self.prec:
                return self.start + k
        return None

    def __add__(self, other: "Series") -> "Series":
        start = min(self.start, other.start)
        prec = min(self.prec, other.prec)
        coeffs = [self.coeff(p) + other.coeff(p) for p in range(start, prec)]
        return Series(start, coeffs, prec)

    def __neg__(self):
        return Series(self.start, [-c for c in self.coeffs], self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Series):
            c = QSqrt2.coerce(other)
            return Series(self.start, [c * x for x in self.coeffs], self.prec)
        va = self.valuation()
        vb = other.valuation()
        va = self.prec if va is None else va
        vb = other.prec if vb is None else vb
        prec = min(self.prec + vb, other.prec + va)
        start = self.start + other.start
        out = [QSqrt2(0)] * max(0, prec - start)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                p = self.start + other.start + i + j
                if p < prec:
                    out[p - start] = out[p - start] + a * b
        return Series(start, out, prec)

    __rmul__ = __mul__

    def shift(self, k: int) -> "Series":
        """Multiply by ``t^k``."""
        return Series(self.start + k, self.coeffs, self.prec + k)

    def inverse(self) -> "Series":
        v = self.valuation()
        if v is None:
            raise NoLimitError("cannot invert a series that vanishes to known order")
        c0 = self.coeff(v)
        rel = self.prec - v  # relative precision
        # u = self / (c0 t^v) - 1 = sum_{k>=1} u_k t^k
        u = [self.coeff(v + k) / c0 for k in range(rel)]
        u[0] = QSqrt2(0)
        inv = [QSqrt2(0)] * rel
        inv[0] = QSqrt2(1)
        for k in range(1, rel):
            acc = QSqrt2(0)
            for j in range(1, k + 1):
                acc = acc + u[j] * inv[k - j]
            inv[k] = -acc
        return Series(-v, [x / c0 for x in inv], -v + rel)

    def __truediv__(self, other):
        if isinstance(other, Series):
            return self * other.inverse()
        return self * (QSqrt2(1) / QSqrt2.coerce(other))

    def __repr__(self):
        terms = [f"({c})t^{self.start + k}" for k, c in enumerate(self.coeffs) if c]
        return " + ".join(terms or ["0"]) + f" + O(t^{self.prec})"


def _binom_half(k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out *= (Fraction(1, 2) - i) / (i + 1)
    return out


def _atom_series(name: str, side: int, order: int) -> Series:
    if name == "t":
        return Series(0, [0, 1], order)
    if name == "|t|":
        return Series(0, [0, side], order)
    if name == "t^2":
        return Series(0, [0, 0, 1], order)
    sgn = 1 if name == "sqrt[1+t^2]" else -1
    coeffs = [QSqrt2(0)] * order
    for k in range(0, (order + 1) // 2):
        if 2 * k < order:
            coeffs[2 * k] = QSqrt2(_binom_half(k) * sgn ** k)
    return Series(0, coeffs, order)


# -- expression trees ---------------------------------------------------------

class ParamScalar:
    """Immutable expression tree in the transition parameter."""

    __slots__ = ("op", "args")

    def __init__(self, op: str, args: tuple):
        self.op = op
        self.args = args

    # constructors
    @classmethod
    def const(cls, value) -> "ParamScalar":
        v = QSqrt2.coerce(value) if not isinstance(value, str) else _parse_const(value)
        if v.a != 0 and v.b != 0:
            # keep the atom set honest: a + b sqrt2 is a sum of two constants
            return cls("+", (cls("const", (QSqrt2(v.a),)), cls("const", (QSqrt2(0, v.b),))))
        return cls("const", (v,))

    @classmethod
    def atom(cls, name: str) -> "ParamScalar":
        if name not in ATOMS:
            raise ValueError(f"unsupported atom {name!r}; allowed: {', '.join(ATOMS)}")
        return cls("atom", (name,))

    @staticmethod
    def _wrap(x) -> "ParamScalar":
        if isinstance(x, ParamScalar):
            return x
        return ParamScalar.const(x)

    def __add__(self, other):
        return ParamScalar("+", (self, self._wrap(other)))

    def __radd__(self, other):
        return ParamScalar("+", (self._wrap(other), self))

    def __sub__(self, other):
        return ParamScalar("-", (self, self._wrap(other)))

    def __rsub__(self, other):
        return ParamScalar("-", (self._wrap(other), self))

    def __mul__(self, other):
        return ParamScalar("*", (self, self._wrap(other)))

    def __rmul__(self, other):
        return ParamScalar("*", (self._wrap(other), self))

    def __neg__(self):
        return ParamScalar("-", (self,))

    # evaluation
    def evaluate(self, t):
        """Float evaluation for float ``t``; exact (``QSqrt2``) for exact ``t``."""
        exact = isinstance(t, (QSqrt2, Fraction, int)) and not isinstance(t, bool)
        if exact:
            return self._eval_exact(QSqrt2.coerce(t))
        return self._eval_float(float(t))

    def _eval_float(self, t: float) -> float:
        op, args = self.op, self.args
        if op == "const":
            return float(args[0])
        if op == "atom":
            name = args[0]
            if name == "t":
                return t
            if name == "|t|":
                return abs(t)
            if name == "t^2":
                return t * t
            if name == "sqrt[1+t^2]":
                return math.sqrt(1.0 + t * t)
            if 1.0 - t * t < 0:
                raise DomainError(f"sqrt[1-t^2] undefined at t={t}")
            return math.sqrt(1.0 - t * t)
        vals = [a._eval_float(t) for a in args]
        if op == "+":
            return sum(vals)
        if op == "*":
            out = 1.0
            for v in vals:
                out *= v
            return out
        if op == "-":
            return -vals[0] if len(vals) == 1 else vals[0] - sum(vals[1:])
        raise AssertionError(op)

    def _eval_exact(self, t: QSqrt2) -> QSqrt2:
        op, args = self.op, self.args
        if op == "const":
            return args[0]
        if op == "atom":
            name = args[0]
            if name == "t":
                return t
            if name == "|t|":
                return abs(t)
            if name == "t^2":
                return t * t
            if name == "sqrt[1+t^2]":
                return exact_sqrt(1 + t * t)
            return exact_sqrt(1 - t * t)
        vals = [a._eval_exact(t) for a in args]
        if op == "+":
            return sum(vals[1:], vals[0])
        if op == "*":
            out = vals[0]
            for v in vals[1:]:
                out = out * v
            return out
        if op == "-":
            return -vals[0] if len(vals) == 1 else vals[0] - sum(vals[1:], QSqrt2(0))
        raise AssertionError(op)

    def series(self, side: int, order: int = SERIES_ORDER) -> Series:
        """Laurent expansion at ``t -> 0`` from the side ``sign(side)``."""
        side = 1 if side > 0 else -1
        op, args = self.op, self.args
        if op == "const":
            return Series.constant(args[0], order)
        if op == "atom":
            return _atom_series(args[0], side, order)
        parts = [a.series(side, order) for a in args]
        if op == "+":
            out = parts[0]
            for p in parts[1:]:
                out = out + p
            return out
        if op == "*":
            out = parts[0]
            for p in parts[1:]:
                out = out * p
            return out
        if op == "-":
            if len(parts) == 1:
                return -parts[0]
            out = parts[0]
            for p in parts[1:]:
                out = out - p
            return out
        raise AssertionError(op)

    def derivative_at_zero(self, side: int = 1) -> QSqrt2:
        return self.series(side).coeff(1)

    def depends_only_on_abs(self) -> bool:
        """True when the tree uses ``t`` only through ``|t|`` and even atoms."""
        if self.op == "atom":
            return self.args[0] != "t"
        if self.op == "const":
            return True
        return all(a.depends_only_on_abs() for a in self.args)

    def to_prefix(self) -> str:
        if self.op == "const":
            return _const_token(self.args[0])
        if self.op == "atom":
            return self.args[0]
        return "(" + " ".join([self.op] + [a.to_prefix() for a in self.args]) + ")"

    def __eq__(self, other):
        if not isinstance(other, ParamScalar):
            return NotImplemented
        return self.op == other.op and self.args == other.args

    def __hash__(self):
        return hash((self.op, self.args))

    def __repr__(self):
        return f"ParamScalar({self.to_prefix()!r})"


def _const_token(v: QSqrt2) -> str:
    if v.b == 0:
        return str(v.a)
    if v.a != 0:
        return f"(+ {v.a} {_const_token(QSqrt2(0, v.b))})"
    if v.b == 1:
        return "sqrt2"
    if v.b == -1:
        return "-sqrt2"
    return f"(* {v.b} sqrt2)"


_CONST_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def _parse_const(tok: str) -> QSqrt2:
    if tok in ("sqrt2", "+sqrt2"):
        return SQRT2
    if tok == "-sqrt2":
        return -SQRT2
    if _CONST_RE.match(tok):
        return QSqrt2(Fraction(tok))
    raise ValueError(f"bad constant {tok!r}")


_TOKEN_RE = re.compile(r"\(|\)|[^\s()]+")


def parse(text: str) -> ParamScalar:
    """Parse the prefix syntax into a :class:`ParamScalar`."""
    tokens = _TOKEN_RE.findall(text)
    if not tokens:
        raise ValueError("empty expression")
    pos = 0

    def read():
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError(f"unexpected end of expression in {text!r}")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            if pos >= len(tokens):
                raise ValueError(f"unexpected end of expression in {text!r}")
            op = tokens[pos]
            pos += 1
            if op not in ("+", "-", "*"):
                raise ValueError(f"unknown operator {op!r} in {text!r}")
            args = []
            while pos < len(tokens) and tokens[pos] != ")":
                args.append(read())
            if pos >= len(tokens):
                raise ValueError(f"missing ')' in {text!r}")
            pos += 1
            if not args or (op != "-" and len(args) < 2):
                raise ValueError(f"operator {op!r} needs more arguments in {text!r}")
            return ParamScalar(op, tuple(args))
        if tok == ")":
            raise ValueError(f"unexpected ')' in {text!r}")
        if tok in ATOMS:
            return ParamScalar.atom(tok)
        try:
            return ParamScalar.const(_parse_const(tok))
        except ValueError:
            raise ValueError(f"unknown token {tok!r} in {text!r} "
                             f"(allowed atoms: {', '.join(ATOMS)})") from None

    expr = read()
    if pos != len(tokens):
        raise ValueError(f"trailing tokens in {text!r}")
    return expr


# -- families of walls --------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_closed: bool = False
    hi_closed: bool = False

    def __contains__(self, t) -> bool:
        x = float(t)
        above = x >= self.lo if self.lo_closed else x > self.lo
        below = x <= self.hi if self.hi_closed else x < self.hi
        return above and below

    def __str__(self):
        return (("[" if self.lo_closed else "(") + f"{self.lo:g}, {self.hi:g}"
                + ("]" if self.hi_closed else ")"))

    @classmethod
    def parse(cls, text: str) -> "Interval":
        m = re.match(r"^\s*([\[(])\s*([^,]+?)\s*,\s*(.+?)\s*([\])])\s*$", text)
        if not m:
            raise ValueError(f"bad interval {text!r}")

        def num(s):
            s = s.strip()
            if s in ("inf", "+inf"):
                return math.inf
            if s == "-inf":
                return -math.inf
            sm = re.match(r"^1/sqrt\((\d+)\)$", s)
            if sm:
                return 1.0 / math.sqrt(int(sm.group(1)))
            return float(Fraction(s))

        return cls(num(m.group(2)), num(m.group(3)), m.group(1) == "[", m.group(4) == "]")


@dataclass(frozen=True)
class HalfSpaceFamily:
    """One wall of a parametrized polytope.

    ``coeffs`` are used for ``t >= 0``; ``coeffs_neg`` (when given) replaces
    them for ``t < 0``.
    """

    label: str
    coeffs: Tuple[ParamScalar, ...]
    domain: Interval
    coeffs_neg: Optional[Tuple[ParamScalar, ...]] = None

    def __post_init__(self):
        if self.coeffs_neg is not None and len(self.coeffs_neg) != len(self.coeffs):
            raise ValueError(f"wall {self.label}: coefficient lists differ in length")

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def coeffs_for(self, t_or_side) -> Tuple[ParamScalar, ...]:
        if self.coeffs_neg is not None and float(t_or_side) < 0:
            return self.coeffs_neg
        return self.coeffs

    def raw(self, t) -> np.ndarray:
        """Coefficient vector at ``t`` without normalization."""
        if t not in self.domain:
            raise DomainError(f"t={t} outside the domain {self.domain} of wall {self.label}")
        vals = [c.evaluate(t) for c in self.coeffs_for(t)]
        if isinstance(vals[0], QSqrt2):
            return np.array(vals, dtype=object)
        return np.array(vals, dtype=float)

    def evaluate(self, t) -> DualHalfSpace:
        return family_eval(self, t)

    def is_even(self, side_neg: bool = False) -> bool:
        cs = self.coeffs_for(-1 if side_neg else 1)
        return all(c.depends_only_on_abs() for c in cs)

    def to_record(self) -> dict:
        rec = {"label": self.label, "coeffs": [c.to_prefix() for c in self.coeffs]}
        if self.coeffs_neg is not None:
            rec["coeffs_neg"] = [c.to_prefix() for c in self.coeffs_neg]
        return rec


def family_eval(f: HalfSpaceFamily, t) -> DualHalfSpace:
    """Evaluate the wall at ``t`` and return its canonical representative."""
    raw = f.raw(t)
    if not any(raw):
        raise GeometryError(f"wall {f.label} vanishes at t={t}")
    return DualHalfSpace(canonical_vector(raw), f.label)


def _abs_t(t):
    return abs(QSqrt2.coerce(t)) if isinstance(t, (QSqrt2, Fraction, int)) else abs(float(t))


def _rescale_raw(raw: np.ndarray, kind: str, t) -> np.ndarray:
    at = _abs_t(t)
    out = raw.copy()
    if kind == "gamma":
        out[0] = out[0] / at
    elif kind == "eta":
        out[-1] = out[-1] * at
    else:
        raise ValueError(f"unknown rescaling {kind!r}; use 'gamma' or 'eta'")
    return out


def dual_rescale(f: HalfSpaceFamily, kind: str, t) -> DualHalfSpace:
    """The wall of ``r_{|t|}(P(t))``: dual action of gamma or eta on ``f(t)``."""
    if float(t) == 0.0:
        raise ValueError("t = 0: use rescaled_limit")
    raw = f.raw(t)
    return DualHalfSpace(canonical_vector(_rescale_raw(raw, kind, t)), f.label)


def symbolic_rescaled_limit(f: HalfSpaceFamily, kind: str, side: int) -> np.ndarray:
    """Exact leading-order limit vector (not normalized)."""
    s = 1 if side > 0 else -1
    series = [c.series(s) for c in f.coeffs_for(s)]
    if kind == "gamma":
        series[0] = series[0].shift(-1) * s
    elif kind == "eta":
        series[-1] = series[-1].shift(1) * s
    else:
        raise ValueError(f"unknown rescaling {kind!r}")
    vals = [x.valuation() for x in series]
    known = [v for v in vals if v is not None]
    if not known:
        raise NoLimitError(f"wall {f.label}: all coordinates vanish to known order")
    v = min(known)
    if any(x.prec <= v for x in series):
        raise NoLimitError(f"wall {f.label}: insufficient series order")
    lead = [x.coeff(v) for x in series]
    sign = QSqrt2(s ** (v % 2) if v >= 0 else s ** ((-v) % 2))
    return np.array([c * sign for c in lead], dtype=object)


def rescaled_limit(f: HalfSpaceFamily, kind: str, side) -> DualHalfSpace:
    """One-sided limit of the rescaled wall as ``t -> 0``.

    ``side`` is ``"pos"``/``"neg"`` or a signed number.  The symbolic answer
    is authoritative.  As a guard, the normalized walls at
    ``|t| = 1e-3, 1e-4, 1e-5`` must either all lie within ``1e-6`` of it or
    approach it with each deviation at least 5 times smaller than the one
    before; otherwise :class:`NoLimitError`.
    """
    s = _side(side)
    exact = symbolic_rescaled_limit(f, kind, s)
    limit = canonical_vector(exact)
    lim_f = as_float(limit)
    devs = []
    for h in LIMIT_SCHEDULE:
        t = s * h
        if t not in f.domain:
            continue
        approx = as_float(dual_rescale(f, kind, t).coeffs)
        devs.append(float(np.max(np.abs(approx - lim_f))))
    close = all(d <= 1e-6 for d in devs)
    shrinking = all(b <= a / 5 for a, b in zip(devs, devs[1:]))
    if devs and not (close or shrinking):
        raise NoLimitError(
            f"no projective limit for wall {f.label}: numeric guard deviations "
            f"{', '.join(f'{d:.2e}' for d in devs)} from {lim_f}")
    return DualHalfSpace(limit, f.label)


def _side(side) -> int:
    if isinstance(side, str):
        if side not in ("pos", "neg"):
            raise ValueError("side must be 'pos' or 'neg'")
        return 1 if side == "pos" else -1
    return 1 if side > 0 else -1


# -- data file ----------------------------------------------------------------

DATA_VERSION = 1


def _wall_from_record(rec: dict, domain: Interval, dim: int) -> HalfSpaceFamily:
    coeffs = tuple(parse(c) for c in rec["coeffs"])
    neg = tuple(parse(c) for c in rec["coeffs_neg"]) if "coeffs_neg" in rec else None
    if len(coeffs) != dim:
        raise ValueError(f"wall {rec['label']}: expected {dim} coefficients, got {len(coeffs)}")
    wall_domain = Interval.parse(rec["domain"]) if "domain" in rec else domain
    return HalfSpaceFamily(rec["label"], coeffs, wall_domain, neg)


def load_family_data(path=None) -> Dict[str, dict]:
    """Load the versioned family file; returns ``name -> record`` with parsed walls."""
    if path is None:
        text = resources.files("transition_lab.data").joinpath("families.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    raw = json.loads(text)
    if raw.get("version") != DATA_VERSION:
        raise ValueError(f"unsupported family data version {raw.get('version')!r}")
    out = {}
    for name, rec in raw["families"].items():
        domain = Interval.parse(rec["domain"])
        dim = rec["dimension"] + 1
        walls = [_wall_from_record(w, domain, dim) for w in rec["walls"]]
        out[name] = dict(rec, walls=walls, domain=domain)
    return out
