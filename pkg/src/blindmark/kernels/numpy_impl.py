"""Pure numpy implementations of the hot kernels.

This is the fallback backend, selected when numba is unavailable or when
BLINDMARK_DISABLE_NUMBA is set. Every function has a numba twin in
numba_impl.py and the pair must agree; tests/test_kernels.py holds them to
that.
"""

import numpy as np

from .common import DCT_BASIS, DCT_BASIS_T, INV_SQRT2, TAN_22_5, TAN_67_5


def dct2_batch(blocks):
    """Forward 2-D DCT of a (n, 8, 8) float64 stack."""
    return DCT_BASIS @ blocks @ DCT_BASIS_T


def idct2_batch(coeffs):
    return DCT_BASIS_T @ coeffs @ DCT_BASIS


def haar_fwd(plane):
    """One analysis level of the orthonormal Haar transform.

    Returns (ll, lh, hl, hh) at half resolution. First letter is the
    horizontal (row-direction) band, second the vertical.
    """
    lo = (plane[:, 0::2] + plane[:, 1::2]) * INV_SQRT2
    hi = (plane[:, 0::2] - plane[:, 1::2]) * INV_SQRT2
    ll = (lo[0::2, :] + lo[1::2, :]) * INV_SQRT2
    lh = (lo[0::2, :] - lo[1::2, :]) * INV_SQRT2
    hl = (hi[0::2, :] + hi[1::2, :]) * INV_SQRT2
    hh = (hi[0::2, :] - hi[1::2, :]) * INV_SQRT2
    return ll, lh, hl, hh


def haar_inv(ll, lh, hl, hh):
    h2, w2 = ll.shape
    lo = np.empty((h2 * 2, w2), np.float64)
    hi = np.empty((h2 * 2, w2), np.float64)
    lo[0::2, :] = (ll + lh) * INV_SQRT2
    lo[1::2, :] = (ll - lh) * INV_SQRT2
    hi[0::2, :] = (hl + hh) * INV_SQRT2
    hi[1::2, :] = (hl - hh) * INV_SQRT2
    out = np.empty((h2 * 2, w2 * 2), np.float64)
    out[:, 0::2] = (lo + hi) * INV_SQRT2
    out[:, 1::2] = (lo - hi) * INV_SQRT2
    return out


def gaussian_smooth(img, taps):
    """Separable gaussian with symmetric (mirror) border handling."""
    h, w = img.shape
    r = (len(taps) - 1) // 2
    p = np.pad(img, ((r, r), (0, 0)), mode="symmetric")
    tmp = np.zeros((h, w), np.float64)
    for i in range(len(taps)):
        tmp += taps[i] * p[i:i + h, :]
    p = np.pad(tmp, ((0, 0), (r, r)), mode="symmetric")
    out = np.zeros((h, w), np.float64)
    for i in range(len(taps)):
        out += taps[i] * p[:, i:i + w]
    return out


def sobel_gradients(img):
    """3x3 Sobel derivatives (gx along columns, gy along rows)."""
    p = np.pad(img, 1, mode="symmetric")
    gx = (p[:-2, 2:] + 2.0 * p[1:-1, 2:] + p[2:, 2:]
          - p[:-2, :-2] - 2.0 * p[1:-1, :-2] - p[2:, :-2])
    gy = (p[2:, :-2] + 2.0 * p[2:, 1:-1] + p[2:, 2:]
          - p[:-2, :-2] - 2.0 * p[:-2, 1:-1] - p[:-2, 2:])
    return gx, gy


def nms(mag, gx, gy):
    """Non-maximum suppression with 4-bin quantized gradient direction.

    The direction modulo pi is binned by comparing |gy| against the
    22.5 and 67.5 degree slopes, no atan2 needed. A pixel survives when
    its magnitude is >= the forward neighbor and strictly > the backward
    neighbor along the quantized direction, so a symmetric two-pixel
    ridge keeps exactly one side. Border pixels never survive.
    """
    h, w = mag.shape
    y = np.abs(gy)
    x = np.where(gy < 0.0, -gx, gx)  # flip into the upper half plane
    ax = np.abs(gx)
    flat = y < TAN_22_5 * ax
    slanted = ~flat & (y < TAN_67_5 * ax)
    bins = np.full((h, w), 2, np.uint8)
    bins[flat] = 0
    bins[slanted & (x > 0.0)] = 1
    bins[slanted & (x < 0.0)] = 3
    keep = np.zeros((h, w), np.bool_)
    if h < 3 or w < 3:
        return keep
    inner = (slice(1, h - 1), slice(1, w - 1))
    m_in = mag[inner]
    for b, (dr, dc) in enumerate(((0, 1), (1, 1), (1, 0), (1, -1))):
        sel = bins[inner] == b
        fwd = mag[1 + dr:h - 1 + dr, 1 + dc:w - 1 + dc]
        bwd = mag[1 - dr:h - 1 - dr, 1 - dc:w - 1 - dc]
        keep[inner] |= sel & (m_in >= fwd) & (m_in > bwd)
    return keep


def hysteresis(strong, weak):
    """Grow strong seeds through the weak map, 8-connected."""
    edges = strong & weak
    while True:
        g = np.zeros_like(edges)
        g[1:, :] |= edges[:-1, :]
        g[:-1, :] |= edges[1:, :]
        g[:, 1:] |= edges[:, :-1]
        g[:, :-1] |= edges[:, 1:]
        g[1:, 1:] |= edges[:-1, :-1]
        g[:-1, :-1] |= edges[1:, 1:]
        g[1:, :-1] |= edges[:-1, 1:]
        g[:-1, 1:] |= edges[1:, :-1]
        grown = edges | (g & weak)
        if np.array_equal(grown, edges):
            return edges
        edges = grown


def median_filter(img, k):
    """k x k median with edge replication, k odd. uint8 in, uint8 out."""
    h, w = img.shape
    r = k // 2
    p = np.pad(img, r, mode="edge")
    win = np.lib.stride_tricks.sliding_window_view(p, (k, k))
    out = np.empty((h, w), np.uint8)
    # row slabs keep the float copy made by np.median bounded
    slab = max(1, (1 << 22) // (w * k * k))
    for i in range(0, h, slab):
        j = min(i + slab, h)
        m = np.median(win[i:j].reshape(j - i, w, k * k), axis=2)
        out[i:j] = m.astype(np.uint8)
    return out
