"""Numba toggle.

Set ``SEPCHECK_DISABLE_JIT=1`` to force the pure-numpy kernels; the same
happens automatically when numba is not importable.
"""

import os

_flag = os.environ.get("SEPCHECK_DISABLE_JIT", "").strip().lower()
JIT_REQUESTED = _flag not in ("1", "true", "yes", "on")

try:
    import numba as _nb

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _nb = None
    HAVE_NUMBA = False

USE_JIT = JIT_REQUESTED and HAVE_NUMBA


def njit(*args, **kwargs):
    if HAVE_NUMBA:
        return _nb.njit(*args, **kwargs)
    if args and callable(args[0]):
        return args[0]
    return lambda func: func
