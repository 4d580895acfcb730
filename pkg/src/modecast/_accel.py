"""Optional numba acceleration for the hot numeric kernels.

Kernels are written once, in the subset of numpy that numba's nopython mode
understands, and decorated with :func:`maybe_njit`.  Setting the environment
variable ``MODECAST_DISABLE_NUMBA=1`` (or running without numba installed)
leaves them as plain Python/numpy functions.  The flag is read at import time.
"""

import os

_FLAG = "MODECAST_DISABLE_NUMBA"


def _numba_requested():
    return os.environ.get(_FLAG, "").strip().lower() not in ("1", "true", "yes", "on")


try:
    if not _numba_requested():
        raise ImportError("disabled by " + _FLAG)
    import numba

    NUMBA_ENABLED = True
except ImportError:
    numba = None
    NUMBA_ENABLED = False


def maybe_njit(func):
    """Compile ``func`` with ``numba.njit(cache=True)`` when enabled."""
    if NUMBA_ENABLED:
        return numba.njit(cache=True)(func)
    return func


def backend_name():
    return "numba" if NUMBA_ENABLED else "numpy"
