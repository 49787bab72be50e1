"""Two-level Haar DWT and 8x8 block DCT on macro-blocks.

Both transforms are orthonormal, so energy is preserved exactly and the
inverses are the transposes. A constant block of value c lands at 4c in
ll2 and at 8c in each tile's DC coefficient.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels

TILE = 8


@dataclass
class SubbandSet:
    """Second-level bands at 1/4 resolution, first-level details at 1/2.

    Field naming: first letter horizontal band, second vertical, so lh1 is
    horizontally smooth and vertically detailed.
    """
    ll2: np.ndarray
    lh2: np.ndarray
    hl2: np.ndarray
    hh2: np.ndarray
    lh1: np.ndarray
    hl1: np.ndarray
    hh1: np.ndarray


def _as_float_plane(block, want=None):
    a = np.ascontiguousarray(block, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D block, got shape {a.shape}")
    if want is not None and a.shape != want:
        raise ValueError(f"expected shape {want}, got {a.shape}")
    if a.shape[0] % 4 or a.shape[1] % 4:
        raise ValueError(f"block shape {a.shape} not divisible by 4")
    return a


def dwt2_two_level(block):
    """Analyze a 128x128 block (or any shape divisible by 4) to 7 subbands."""
    a = _as_float_plane(block)
    ll1, lh1, hl1, hh1 = kernels.haar_fwd(a)
    ll2, lh2, hl2, hh2 = kernels.haar_fwd(ll1)
    return SubbandSet(ll2=ll2, lh2=lh2, hl2=hl2, hh2=hh2,
                      lh1=lh1, hl1=hl1, hh1=hh1)


def idwt2_two_level(bands):
    ll1 = kernels.haar_inv(bands.ll2, bands.lh2, bands.hl2, bands.hh2)
    return kernels.haar_inv(ll1, bands.lh1, bands.hl1, bands.hh1)


def _tiles(plane):
    """(h, w) -> (h*w/64, 8, 8) copy in raster tile order."""
    h, w = plane.shape
    if h % TILE or w % TILE:
        raise ValueError(f"plane shape {(h, w)} not divisible by {TILE}")
    t = plane.reshape(h // TILE, TILE, w // TILE, TILE)
    return np.ascontiguousarray(t.swapaxes(1, 2).reshape(-1, TILE, TILE))


def _untile(tiles, shape):
    h, w = shape
    t = tiles.reshape(h // TILE, w // TILE, TILE, TILE)
    return np.ascontiguousarray(t.swapaxes(1, 2).reshape(h, w))


def dct_8x8(tile):
    """Forward DCT of one 8x8 tile."""
    a = _as_float_plane(tile, want=(TILE, TILE))
    return kernels.dct2_batch(a.reshape(1, TILE, TILE))[0]


def idct_8x8(coeffs):
    a = _as_float_plane(coeffs, want=(TILE, TILE))
    return kernels.idct2_batch(a.reshape(1, TILE, TILE))[0]


def dct_tiles(plane):
    """Forward DCT of every 8x8 tile of a subband plane, raster order."""
    return kernels.dct2_batch(_tiles(np.ascontiguousarray(plane, np.float64)))


def idct_tiles(coeffs, shape):
    return _untile(kernels.idct2_batch(np.ascontiguousarray(coeffs, np.float64)),
                   shape)
