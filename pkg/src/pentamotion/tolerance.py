"""Global residual tolerance.

The default is 1e-9 (relative).  ``PENTAMOTION_TOL`` in the environment
overrides it at import time; :func:`set_tolerance` overrides both.
"""

import os
from contextlib import contextmanager

DEFAULT_TOL = 1e-9

_tol = DEFAULT_TOL


def _from_env():
    raw = os.environ.get("PENTAMOTION_TOL")
    if raw is None:
        return DEFAULT_TOL
    value = float(raw)
    if not value > 0:
        raise ValueError(f"PENTAMOTION_TOL must be positive, got {raw!r}")
    return value


def get_tolerance() -> float:
    return _tol


def set_tolerance(value: float) -> None:
    global _tol
    value = float(value)
    if not value > 0:
        raise ValueError("tolerance must be positive")
    _tol = value


def reset_tolerance() -> None:
    global _tol
    _tol = _from_env()


@contextmanager
def tolerance(value: float):
    """Temporarily replace the global tolerance."""
    old = _tol
    set_tolerance(value)
    try:
        yield
    finally:
        set_tolerance(old)


reset_tolerance()
