"""Numba switch.

Set ``BORDERMIN_NUMBA=0`` to force the pure numpy/python kernels.  The flag is
read once at import time.
"""
import os

_flag = os.environ.get("BORDERMIN_NUMBA", "1").strip().lower()
USE_NUMBA = _flag not in ("0", "false", "no", "off")

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    USE_NUMBA = False


def njit(func):
    """``numba.njit(cache=True)`` when available, identity otherwise."""
    if numba is None:
        return func
    return numba.njit(cache=True)(func)
