"""Numba implementations of the hot kernels.

Compiled lazily on first call with cache=True so later processes reuse the
on-disk cache. Matrix products are written as explicit loops on purpose:
numba's np.dot needs SciPy's BLAS bindings and these blocks are tiny anyway.
"""

import numpy as np
from numba import njit

from .common import DCT_BASIS, DCT_BASIS_T, INV_SQRT2, TAN_22_5, TAN_67_5

_D = DCT_BASIS
_DT = DCT_BASIS_T


@njit(cache=True)
def _mm8(a, b, out):
    for i in range(8):
        for j in range(8):
            s = 0.0
            for k in range(8):
                s += a[i, k] * b[k, j]
            out[i, j] = s


@njit(cache=True)
def dct2_batch(blocks):
    n = blocks.shape[0]
    out = np.empty_like(blocks)
    tmp = np.empty((8, 8), np.float64)
    for i in range(n):
        _mm8(_D, blocks[i], tmp)
        _mm8(tmp, _DT, out[i])
    return out


@njit(cache=True)
def idct2_batch(coeffs):
    n = coeffs.shape[0]
    out = np.empty_like(coeffs)
    tmp = np.empty((8, 8), np.float64)
    for i in range(n):
        _mm8(_DT, coeffs[i], tmp)
        _mm8(tmp, _D, out[i])
    return out


@njit(cache=True)
def haar_fwd(plane):
    h, w = plane.shape
    h2 = h // 2
    w2 = w // 2
    ll = np.empty((h2, w2), np.float64)
    lh = np.empty((h2, w2), np.float64)
    hl = np.empty((h2, w2), np.float64)
    hh = np.empty((h2, w2), np.float64)
    for i in range(h2):
        for j in range(w2):
            a = plane[2 * i, 2 * j]
            b = plane[2 * i, 2 * j + 1]
            c = plane[2 * i + 1, 2 * j]
            d = plane[2 * i + 1, 2 * j + 1]
            lo0 = (a + b) * INV_SQRT2
            hi0 = (a - b) * INV_SQRT2
            lo1 = (c + d) * INV_SQRT2
            hi1 = (c - d) * INV_SQRT2
            ll[i, j] = (lo0 + lo1) * INV_SQRT2
            lh[i, j] = (lo0 - lo1) * INV_SQRT2
            hl[i, j] = (hi0 + hi1) * INV_SQRT2
            hh[i, j] = (hi0 - hi1) * INV_SQRT2
    return ll, lh, hl, hh


@njit(cache=True)
def haar_inv(ll, lh, hl, hh):
    h2, w2 = ll.shape
    out = np.empty((h2 * 2, w2 * 2), np.float64)
    for i in range(h2):
        for j in range(w2):
            lo0 = (ll[i, j] + lh[i, j]) * INV_SQRT2
            lo1 = (ll[i, j] - lh[i, j]) * INV_SQRT2
            hi0 = (hl[i, j] + hh[i, j]) * INV_SQRT2
            hi1 = (hl[i, j] - hh[i, j]) * INV_SQRT2
            out[2 * i, 2 * j] = (lo0 + hi0) * INV_SQRT2
            out[2 * i, 2 * j + 1] = (lo0 - hi0) * INV_SQRT2
            out[2 * i + 1, 2 * j] = (lo1 + hi1) * INV_SQRT2
            out[2 * i + 1, 2 * j + 1] = (lo1 - hi1) * INV_SQRT2
    return out


@njit(cache=True, inline="always")
def _mirror(i, n):
    # matches np.pad mode="symmetric" for offsets < n
    if i < 0:
        return -1 - i
    if i >= n:
        return 2 * n - 1 - i
    return i


@njit(cache=True)
def gaussian_smooth(img, taps):
    h, w = img.shape
    r = (taps.size - 1) // 2
    tmp = np.empty((h, w), np.float64)
    for i in range(h):
        for j in range(w):
            s = 0.0
            for t in range(taps.size):
                s += taps[t] * img[_mirror(i + t - r, h), j]
            tmp[i, j] = s
    out = np.empty((h, w), np.float64)
    for i in range(h):
        for j in range(w):
            s = 0.0
            for t in range(taps.size):
                s += taps[t] * tmp[i, _mirror(j + t - r, w)]
            out[i, j] = s
    return out


@njit(cache=True)
def sobel_gradients(img):
    h, w = img.shape
    gx = np.empty((h, w), np.float64)
    gy = np.empty((h, w), np.float64)
    for i in range(h):
        im = _mirror(i - 1, h)
        ip = _mirror(i + 1, h)
        for j in range(w):
            jm = _mirror(j - 1, w)
            jp = _mirror(j + 1, w)
            gx[i, j] = (img[im, jp] + 2.0 * img[i, jp] + img[ip, jp]
                        - img[im, jm] - 2.0 * img[i, jm] - img[ip, jm])
            gy[i, j] = (img[ip, jm] + 2.0 * img[ip, j] + img[ip, jp]
                        - img[im, jm] - 2.0 * img[im, j] - img[im, jp])
    return gx, gy


@njit(cache=True)
def nms(mag, gx, gy):
    h, w = mag.shape
    keep = np.zeros((h, w), np.bool_)
    if h < 3 or w < 3:
        return keep
    for i in range(1, h - 1):
        for j in range(1, w - 1):
            y = abs(gy[i, j])
            x = -gx[i, j] if gy[i, j] < 0.0 else gx[i, j]
            ax = abs(gx[i, j])
            if y < TAN_22_5 * ax:
                dr, dc = 0, 1
            elif y < TAN_67_5 * ax:
                if x > 0.0:
                    dr, dc = 1, 1
                else:
                    dr, dc = 1, -1
            else:
                dr, dc = 1, 0
            m = mag[i, j]
            if m >= mag[i + dr, j + dc] and m > mag[i - dr, j - dc]:
                keep[i, j] = True
    return keep


@njit(cache=True)
def hysteresis(strong, weak):
    h, w = strong.shape
    edges = np.zeros((h, w), np.bool_)
    stack = np.empty(h * w, np.int64)
    for r in range(h):
        for c in range(w):
            if strong[r, c] and weak[r, c] and not edges[r, c]:
                edges[r, c] = True
                top = 0
                stack[top] = r * w + c
                top += 1
                while top > 0:
                    top -= 1
                    pos = stack[top]
                    pr = pos // w
                    pc = pos - pr * w
                    for dr in range(-1, 2):
                        for dc in range(-1, 2):
                            nr = pr + dr
                            nc = pc + dc
                            if 0 <= nr < h and 0 <= nc < w:
                                if weak[nr, nc] and not edges[nr, nc]:
                                    edges[nr, nc] = True
                                    stack[top] = nr * w + nc
                                    top += 1
    return edges


@njit(cache=True)
def median_filter(img, k):
    h, w = img.shape
    r = k // 2
    out = np.empty((h, w), np.uint8)
    buf = np.empty(k * k, np.uint8)
    mid = (k * k) // 2
    for i in range(h):
        for j in range(w):
            t = 0
            for di in range(-r, r + 1):
                ii = min(max(i + di, 0), h - 1)
                for dj in range(-r, r + 1):
                    jj = min(max(j + dj, 0), w - 1)
                    buf[t] = img[ii, jj]
                    t += 1
            # insertion sort beats np.sort's per-pixel allocation here
            for a in range(1, t):
                v = buf[a]
                b = a - 1
                while b >= 0 and buf[b] > v:
                    buf[b + 1] = buf[b]
                    b -= 1
                buf[b + 1] = v
            out[i, j] = buf[mid]
    return out
