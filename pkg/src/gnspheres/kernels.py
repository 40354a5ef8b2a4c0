"""Backend selection for the geometric-product kernels.

The compiled module is used when importable. Setting ``GNSPHERES_PURE=1``
forces the numpy fallback.
"""
from __future__ import annotations

import os

from . import _pykernels as pure

BACKEND = "numpy"
_impl = pure

if not os.environ.get("GNSPHERES_PURE"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on build
        _impl = pure

blade_sign = _impl.blade_sign
gp_int64 = _impl.gp_int64
gp_float64 = _impl.gp_float64

__all__ = ["BACKEND", "blade_sign", "gp_int64", "gp_float64", "pure"]
