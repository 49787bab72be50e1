"""Edge and brightness analysis driving the per-block embedding strength.

Busy, dark blocks hide modification best, so the strength factor grows
with edge density and shrinks with brightness, clamped to a safe band.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .image_core import ensure_gray_image

THRESHOLD_FLOOR = 0.001


@dataclass(frozen=True)
class PsychovisualParams:
    alpha: float = 0.5
    beta: float = 0.25
    sf_min: float = 0.01
    sf_max: float = 0.12
    canny_sigma: float = 1.4
    canny_low: float = 0.1
    canny_high: float = 0.2

    def validate(self):
        if self.alpha < 0 or self.beta < 0:
            raise ValueError(f"alpha and beta must be >= 0, got {self.alpha}, {self.beta}")
        if not 0 < self.sf_min <= self.sf_max:
            raise ValueError(f"need 0 < sf_min <= sf_max, got {self.sf_min}, {self.sf_max}")
        if self.canny_sigma <= 0:
            raise ValueError(f"canny_sigma must be positive, got {self.canny_sigma}")
        if not 0 <= self.canny_low < self.canny_high <= 1:
            raise ValueError(
                f"need 0 <= canny_low < canny_high <= 1, got {self.canny_low}, {self.canny_high}")
        return self


@dataclass(frozen=True)
class BlockStats:
    """Per macro-block features, both normalized to [0, 1]."""
    edge_count: float
    brightness_level: float
    sf: float


def canny_edges(img, params=PsychovisualParams()):
    """Binary edge map: gaussian smoothing, Sobel, thinning, hysteresis.

    Hysteresis thresholds are fractions of the max gradient magnitude.
    """
    img = ensure_gray_image(img)
    params.validate()
    radius = max(1, int(3.0 * params.canny_sigma + 0.5))
    taps = kernels.gaussian_taps(params.canny_sigma, radius)
    smoothed = kernels.gaussian_smooth(img.astype(np.float64), taps)
    gx, gy = kernels.sobel_gradients(smoothed)
    mag = np.hypot(gx, gy)
    thinned = kernels.nms(mag, gx, gy)
    peak = mag.max()
    if peak <= 0.0:
        return np.zeros(img.shape, np.bool_)
    strong = thinned & (mag >= params.canny_high * peak)
    weak = thinned & (mag >= params.canny_low * peak)
    return kernels.hysteresis(strong, weak)


def strength_factor(edge_count, brightness_level, params=PsychovisualParams()):
    """sf = clamp(|alpha * edges - beta * brightness|, sf_min, sf_max)."""
    params.validate()
    raw = abs(params.alpha * edge_count - params.beta * brightness_level)
    return float(min(max(raw, params.sf_min), params.sf_max))


def block_stats(img, edges, grid, params=PsychovisualParams()):
    """Per macro-block (edge density, mean brightness, strength factor)."""
    img = ensure_gray_image(img)
    edges = np.asarray(edges)
    if edges.shape != img.shape:
        raise ValueError(f"edge map shape {edges.shape} != image shape {img.shape}")
    bs = grid.block_size
    area = float(bs * bs)
    stats = []
    for by in range(grid.blocks_y):
        for bx in range(grid.blocks_x):
            rows = slice(by * bs, (by + 1) * bs)
            cols = slice(bx * bs, (bx + 1) * bs)
            edge_count = float(np.count_nonzero(edges[rows, cols])) / area
            brightness = float(img[rows, cols].sum(dtype=np.float64)) / (255.0 * area)
            sf = strength_factor(edge_count, brightness, params)
            stats.append(BlockStats(edge_count=edge_count,
                                    brightness_level=brightness, sf=sf))
    return stats
