"""Kernel dispatch: compiled Cython core when built, numpy fallback otherwise.

Set ``ULTRAWEIGHT_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

if os.environ.get("ULTRAWEIGHT_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

lower_hull = _impl.lower_hull
fdb_table = _impl.fdb_table
legendre_sweep = _impl.legendre_sweep
maxplus_conv = _impl.maxplus_conv
assoc_max = _impl.assoc_max

__all__ = ["BACKEND", "lower_hull", "fdb_table", "legendre_sweep", "maxplus_conv", "assoc_max"]
