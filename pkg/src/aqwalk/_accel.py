"""Optional numba acceleration.

Set ``AQWALK_NO_NUMBA=1`` to force the pure-numpy kernels, e.g. for
debugging or to compare both paths with ``benchmarks/bench_kernels.py``.
"""

import os

_DISABLED = os.environ.get("AQWALK_NO_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

try:
    if _DISABLED:
        raise ImportError("numba disabled by AQWALK_NO_NUMBA")
    from numba import njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def wrap(fn):
            return fn

        return wrap
