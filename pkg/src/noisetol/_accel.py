"""Backend selection for the numeric kernels.

Set ``NOISETOL_DISABLE_NUMBA=1`` to force the pure-numpy path. When numba
is missing the numpy path is used automatically.
"""

import os

_DISABLED = os.environ.get("NOISETOL_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError("numba disabled by NOISETOL_DISABLE_NUMBA")
    from numba import njit as _njit

    NUMBA_AVAILABLE = True
except ImportError:
    _njit = None
    NUMBA_AVAILABLE = False


def njit(*args, **kwargs):
    """``numba.njit`` when numba is active, otherwise the identity decorator."""
    if NUMBA_AVAILABLE:
        return _njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda fn: fn


def backend_name():
    return "numba" if NUMBA_AVAILABLE else "numpy"
