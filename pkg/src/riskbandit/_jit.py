"""Optional numba acceleration.

Hot loops in :mod:`riskbandit.kernels` are written as plain Python functions over
numpy arrays and passed through :func:`maybe_jit`.  By default they are compiled
with ``numba.njit(cache=True, nogil=True)``.  Setting the environment variable
``RISKBANDIT_JIT=0`` (or ``false`` / ``no`` / ``off``) before import keeps them as
ordinary Python functions, which is useful for debugging, coverage, and for
benchmarking the compiled kernels against their interpreted twins.

The two paths execute the exact same source, and the math library calls they rely
on (log, sqrt, exp) are bit-identical between numba and CPython on the supported
platforms, so results do not depend on which path is active.
"""

from __future__ import annotations

import os

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency, but degrade gracefully
    numba = None
    HAS_NUMBA = False

_DISABLED_VALUES = {"0", "false", "no", "off"}


def jit_enabled() -> bool:
    """True when kernels should be compiled with numba."""
    flag = os.environ.get("RISKBANDIT_JIT", "1").strip().lower()
    return HAS_NUMBA and flag not in _DISABLED_VALUES


def maybe_jit(func):
    """Compile ``func`` with numba unless JIT is disabled.

    The returned callable always exposes the original Python function as
    ``py_func`` so callers can time or test both paths.
    """
    if not jit_enabled():
        func.py_func = func
        return func
    return numba.njit(cache=True, nogil=True)(func)
