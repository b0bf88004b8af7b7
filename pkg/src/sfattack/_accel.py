"""Numba switch.

Hot kernels are compiled with ``numba.njit`` unless ``SFATTACK_NO_NUMBA`` is set
to a truthy value (or numba is missing), in which case the pure-numpy
implementations are used instead. The flag is read once, at import time.
"""
import os

_FLAG = os.environ.get("SFATTACK_NO_NUMBA", "").strip().lower()

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

USE_NUMBA = numba is not None and _FLAG not in ("1", "true", "yes", "on")


def njit(*args, **kwargs):
    """``numba.njit`` with cache enabled; returns the function untouched when
    numba is unavailable."""
    if numba is None:
        if args and callable(args[0]):
            return args[0]
        return lambda f: f
    kwargs.setdefault("cache", True)
    kwargs.setdefault("nogil", True)
    return numba.njit(*args, **kwargs)


def backend():
    return "numba" if USE_NUMBA else "numpy"
