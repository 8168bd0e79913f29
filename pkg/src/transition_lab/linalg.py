"""Small linear-algebra kernel that works for float and exact arrays.

Exact arrays are numpy object arrays of :class:`~transition_lab.qsqrt2.QSqrt2`.
Float arrays go through numpy/LAPACK; exact ones through plain Gauss-Jordan
elimination, which is plenty for matrices of size at most 5.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .qsqrt2 import QSqrt2

__all__ = [
    "is_exact", "as_array", "as_exact", "as_float", "max_abs", "rref",
    "nullspace", "rank", "inverse", "identity", "allclose_exact",
]


def is_exact(a) -> bool:
    a = np.asarray(a)
    return a.dtype == object


def _exact_scalar(x):
    if isinstance(x, QSqrt2):
        return x
    if isinstance(x, (int, Fraction, np.integer)):
        return QSqrt2(int(x) if isinstance(x, np.integer) else x)
    raise TypeError(f"cannot use {x!r} ({type(x).__name__}) in exact mode")


def as_exact(a) -> np.ndarray:
    """Convert ints/Fractions/QSqrt2 entries to an object array of QSqrt2."""
    arr = np.asarray(a, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = _exact_scalar(x)
    return out


def as_float(a) -> np.ndarray:
    arr = np.asarray(a)
    if arr.dtype == object:
        return np.vectorize(float, otypes=[float])(arr) if arr.size else arr.astype(float)
    return arr.astype(float)


def as_array(a, exact=None) -> np.ndarray:
    """Coerce to a float or exact array.

    With ``exact=None`` the kind is inferred: any ``QSqrt2`` or ``Fraction``
    entry makes the result exact.
    """
    if exact is None:
        arr = np.asarray(a, dtype=object) if not isinstance(a, np.ndarray) else a
        if arr.dtype == object:
            exact = any(isinstance(x, (QSqrt2, Fraction)) for x in arr.flat)
        else:
            exact = False
    if exact:
        return as_exact(a)
    return as_float(a)


def identity(n: int, exact: bool = False) -> np.ndarray:
    if exact:
        out = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                out[i, j] = QSqrt2(1 if i == j else 0)
        return out
    return np.eye(n)


def max_abs(a):
    a = np.asarray(a)
    if a.dtype == object:
        return max((abs(x) for x in a.flat), default=QSqrt2(0))
    return float(np.max(np.abs(a))) if a.size else 0.0


def rref(m: np.ndarray):
    """Exact reduced row echelon form; returns ``(R, pivot_columns)``."""
    r = np.array(m, dtype=object, copy=True)
    rows, cols = r.shape
    pivots = []
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        piv = next((i for i in range(row, rows) if r[i, col]), None)
        if piv is None:
            continue
        if piv != row:
            r[[row, piv]] = r[[piv, row]]
        p = r[row, col]
        r[row] = np.array([x / p for x in r[row]], dtype=object)
        for i in range(rows):
            if i != row and r[i, col]:
                f = r[i, col]
                r[i] = np.array([x - f * y for x, y in zip(r[i], r[row])], dtype=object)
        pivots.append(col)
        row += 1
    return r, pivots


def nullspace(m, tol: float = 1e-10) -> np.ndarray:
    """Basis of the right kernel, one vector per row.

    For float input the relative threshold ``tol`` is applied to the singular
    values (relative to the largest one).
    """
    m = np.asarray(m)
    if m.dtype == object:
        r, pivots = rref(m)
        cols = m.shape[1]
        free = [c for c in range(cols) if c not in pivots]
        basis = []
        for f in free:
            v = np.array([QSqrt2(0)] * cols, dtype=object)
            v[f] = QSqrt2(1)
            for i, p in enumerate(pivots):
                v[p] = -r[i, f]
            basis.append(v)
        if not basis:
            return np.empty((0, cols), dtype=object)
        return np.array(basis, dtype=object)
    if m.size == 0:
        return np.eye(m.shape[1])
    _, s, vt = np.linalg.svd(m)
    scale = s[0] if s.size and s[0] > 0 else 1.0
    r = int(np.sum(s > tol * scale))
    return vt[r:]


def rank(m, tol: float = 1e-10) -> int:
    m = np.asarray(m)
    if m.dtype == object:
        return len(rref(m)[1])
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    scale = s[0] if s[0] > 0 else 1.0
    return int(np.sum(s > tol * scale))


def inverse(m) -> np.ndarray:
    m = np.asarray(m)
    if m.dtype != object:
        return np.linalg.inv(m)
    n = m.shape[0]
    aug = np.concatenate([m, identity(n, exact=True)], axis=1)
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise np.linalg.LinAlgError("singular matrix")
    return r[:, n:]


def allclose_exact(a, b, tol: float = 1e-10) -> bool:
    """Exact equality for exact arrays, ``max|a-b| <= tol`` otherwise."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        return False
    if a.dtype == object and b.dtype == object:
        return all(x == y for x, y in zip(a.flat, b.flat))
    return bool(np.max(np.abs(as_float(a) - as_float(b)), initial=0.0) <= tol)
