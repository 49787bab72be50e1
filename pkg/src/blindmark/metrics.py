"""Quality and robustness metrics: PSNR, SSIM, NC, BER."""

import numpy as np

from . import kernels
from .image_core import ensure_gray_image

PSNR_CAP = 99.0

# standard SSIM constants for 8-bit data
_SSIM_SIGMA = 1.5
_SSIM_RADIUS = 5  # 11x11 window
_C1 = (0.01 * 255.0) ** 2
_C2 = (0.03 * 255.0) ** 2


def _pair(a, b):
    a = ensure_gray_image(a)
    b = ensure_gray_image(b)
    if a.shape != b.shape:
        raise ValueError(f"image shapes differ: {a.shape} vs {b.shape}")
    return a, b


def psnr(a, b):
    """Peak signal-to-noise ratio in dB, capped at 99 for (near-)identical."""
    a, b = _pair(a, b)
    mse = np.mean((a.astype(np.float64) - b.astype(np.float64)) ** 2)
    if mse == 0.0:
        return PSNR_CAP
    return float(min(PSNR_CAP, 10.0 * np.log10(255.0 ** 2 / mse)))


def ssim(a, b):
    """Mean structural similarity over an 11x11 gaussian window."""
    a, b = _pair(a, b)
    if min(a.shape) < 2 * _SSIM_RADIUS + 1:
        raise ValueError(f"image {a.shape} smaller than the {2 * _SSIM_RADIUS + 1} window")
    taps = kernels.gaussian_taps(_SSIM_SIGMA, _SSIM_RADIUS)
    x = a.astype(np.float64)
    y = b.astype(np.float64)
    ux = kernels.gaussian_smooth(x, taps)
    uy = kernels.gaussian_smooth(y, taps)
    uxx = kernels.gaussian_smooth(x * x, taps)
    uyy = kernels.gaussian_smooth(y * y, taps)
    uxy = kernels.gaussian_smooth(x * y, taps)
    vx = uxx - ux * ux
    vy = uyy - uy * uy
    cxy = uxy - ux * uy
    s = ((2.0 * ux * uy + _C1) * (2.0 * cxy + _C2)) / \
        ((ux * ux + uy * uy + _C1) * (vx + vy + _C2))
    r = _SSIM_RADIUS
    return float(s[r:-r, r:-r].mean())


def nc(bits_a, bits_b):
    """Normalized correlation of two equal-length bit vectors."""
    a = np.asarray(bits_a, np.float64).ravel()
    b = np.asarray(bits_b, np.float64).ravel()
    if a.shape != b.shape:
        raise ValueError(f"bit vector lengths differ: {a.size} vs {b.size}")
    ea = float((a * a).sum())
    eb = float((b * b).sum())
    if ea == 0.0 and eb == 0.0:
        return 1.0
    if ea == 0.0 or eb == 0.0:
        return 0.0
    return float((a * b).sum() / np.sqrt(ea * eb))


def ber(bits_a, bits_b):
    """Fraction of differing bits."""
    a = np.asarray(bits_a).ravel()
    b = np.asarray(bits_b).ravel()
    if a.shape != b.shape:
        raise ValueError(f"bit vector lengths differ: {a.size} vs {b.size}")
    if a.size == 0:
        raise ValueError("bit vectors are empty")
    return float(np.mean(a != b))
