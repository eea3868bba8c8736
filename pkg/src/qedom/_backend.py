"""Kernel backend selection.

The hot numeric kernels (theta-series summation) exist in two variants: a
numba ``@njit`` version and a pure-numpy broadcast version.  The active
variant is chosen once at import time:

* ``QED_PURE_NUMPY=1`` in the environment forces the numpy path;
* otherwise numba is used when it imports cleanly, numpy as fallback.

Both variants are always importable individually (``benchmarks/`` times them
against each other); only the default dispatch is affected by the flag.
"""

from __future__ import annotations

import os

_FORCE_NUMPY = os.environ.get("QED_PURE_NUMPY", "").strip() in {"1", "true", "yes"}

try:
    if _FORCE_NUMPY:
        raise ImportError("numpy backend forced via QED_PURE_NUMPY")
    from numba import njit  # noqa: F401

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def backend_name() -> str:
    """Name of the kernel backend selected at import time."""
    return "numba" if HAVE_NUMBA else "numpy"


def worker_count() -> int:
    """Worker cap for embarrassingly parallel verification checks.

    Controlled by the ``QED_THREADS`` environment variable; defaults to 1
    (sequential) which is also the deterministic reference ordering.
    """
    raw = os.environ.get("QED_THREADS", "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)
