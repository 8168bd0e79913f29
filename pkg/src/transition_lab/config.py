"""Module-wide numerical tolerance.

The default relative tolerance is ``1e-10``.  It can be changed for the whole
process with :func:`set_tolerance` or, for command-line runs, with the
``TRANSITION_LAB_TOL`` environment variable.
"""

import os
from contextlib import contextmanager

DEFAULT_TOL = 1e-10
ENV_VAR = "TRANSITION_LAB_TOL"

_tol = None


def get_tolerance() -> float:
    global _tol
    if _tol is None:
        raw = os.environ.get(ENV_VAR)
        _tol = float(raw) if raw else DEFAULT_TOL
    return _tol


def set_tolerance(tol: float) -> None:
    global _tol
    if tol < 0:
        raise ValueError("tolerance must be non-negative")
    _tol = float(tol)


@contextmanager
def tolerance(tol: float):
    """Temporarily override the module-wide tolerance."""
    old = get_tolerance()
    set_tolerance(tol)
    try:
        yield
    finally:
        set_tolerance(old)


def resolve(tol=None) -> float:
    return get_tolerance() if tol is None else float(tol)
