"""Hot numeric kernels with a numba backend and a pure numpy fallback.

The backend is picked once at import time: numba when importable, numpy
otherwise. Set BLINDMARK_DISABLE_NUMBA=1 (or "true"/"yes") to force the
numpy path. BACKEND names the active choice.
"""

import os

from .common import DCT_BASIS, DCT_BASIS_T, INV_SQRT2, gaussian_taps

_KERNEL_NAMES = (
    "dct2_batch", "idct2_batch", "haar_fwd", "haar_inv",
    "gaussian_smooth", "sobel_gradients", "nms", "hysteresis",
    "median_filter",
)


def _numba_disabled():
    return os.environ.get("BLINDMARK_DISABLE_NUMBA", "").strip().lower() in (
        "1", "true", "yes")


if _numba_disabled():
    from . import numpy_impl as _impl
    BACKEND = "numpy"
else:
    try:
        from . import numba_impl as _impl
        BACKEND = "numba"
    except ImportError:
        from . import numpy_impl as _impl
        BACKEND = "numpy"

dct2_batch = _impl.dct2_batch
idct2_batch = _impl.idct2_batch
haar_fwd = _impl.haar_fwd
haar_inv = _impl.haar_inv
gaussian_smooth = _impl.gaussian_smooth
sobel_gradients = _impl.sobel_gradients
nms = _impl.nms
hysteresis = _impl.hysteresis
median_filter = _impl.median_filter

__all__ = list(_KERNEL_NAMES) + [
    "BACKEND", "DCT_BASIS", "DCT_BASIS_T", "INV_SQRT2", "gaussian_taps",
]
