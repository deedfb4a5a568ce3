"""Backend selection for the hot kernels.

The compiled extension is preferred when it was built; the numpy fallback
is picked up transparently otherwise.  Set TUBECHECK_PURE=1 to force the
fallback (used by the benchmark and the agreement tests).
"""

from __future__ import annotations

import os

from . import _kernels_py

BASE_BALL = _kernels_py.BASE_BALL
BASE_SHELL = _kernels_py.BASE_SHELL
BASE_POLY = _kernels_py.BASE_POLY
BASE_SEGS = _kernels_py.BASE_SEGS
FIBER_FULL = _kernels_py.FIBER_FULL
FIBER_BALL = _kernels_py.FIBER_BALL

if os.environ.get("TUBECHECK_PURE"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

base_distance = _impl.base_distance
tube_delta = _impl.tube_delta
neg_log_delta = _impl.neg_log_delta
levi_min_scan = _impl.levi_min_scan


def backends():
    """All importable backends, keyed by name (for benchmarks/tests)."""
    found = {"python": _kernels_py}
    try:
        from . import _speedups

        found["compiled"] = _speedups
    except ImportError:
        pass
    return found
