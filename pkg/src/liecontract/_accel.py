"""Optional numba acceleration.

Set ``LIECONTRACT_DISABLE_NUMBA=1`` to force the pure-numpy code paths (also
used automatically when numba is not importable).
"""

import os

_DISABLED = os.environ.get("LIECONTRACT_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

try:
    if _DISABLED:
        raise ImportError
    import numba

    NUMBA_AVAILABLE = True
except ImportError:
    numba = None
    NUMBA_AVAILABLE = False


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise the identity decorator."""
    if NUMBA_AVAILABLE:
        return numba.njit(*args, **kwargs)
    if args and callable(args[0]):
        return args[0]
    return lambda fn: fn
