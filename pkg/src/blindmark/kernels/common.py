"""Shared constants for the kernel backends."""

import math

import numpy as np

INV_SQRT2 = 1.0 / np.sqrt(2.0)

# direction-bin slopes: |tan| at 22.5 and 67.5 degrees. Classifying the
# gradient by slope comparison instead of atan2 keeps both backends on the
# same few multiplies, so their nms outputs match exactly.
TAN_22_5 = math.tan(math.pi / 8.0)
TAN_67_5 = math.tan(3.0 * math.pi / 8.0)


def _dct_basis_8():
    # row k of the orthonormal 8-point DCT-II basis, D @ D.T == I
    k = np.arange(8, dtype=np.float64).reshape(8, 1)
    n = np.arange(8, dtype=np.float64).reshape(1, 8)
    basis = np.cos((2.0 * n + 1.0) * k * np.pi / 16.0)
    basis[0, :] *= np.sqrt(1.0 / 8.0)
    basis[1:, :] *= np.sqrt(2.0 / 8.0)
    return basis


DCT_BASIS = _dct_basis_8()
DCT_BASIS_T = np.ascontiguousarray(DCT_BASIS.T)


def gaussian_taps(sigma, radius):
    """Sum-normalized sampled gaussian, length 2*radius + 1."""
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if radius < 1:
        raise ValueError(f"radius must be >= 1, got {radius}")
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    taps = np.exp(-0.5 * (x / sigma) ** 2)
    return taps / taps.sum()
