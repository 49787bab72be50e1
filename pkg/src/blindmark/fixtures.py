"""Synthetic test images. All 512x512 uint8 unless asked otherwise."""

import numpy as np

from . import kernels


def gradient(size=512, horizontal=True):
    ramp = np.rint(np.linspace(0.0, 255.0, size)).astype(np.uint8)
    img = np.tile(ramp, (size, 1))
    return img if horizontal else img.T.copy()


def checkerboard(size=512, cell=64):
    idx = np.arange(size) // cell
    board = (idx[:, None] + idx[None, :]) % 2
    return (board * 255).astype(np.uint8)


def noise(size=512, seed=7):
    rng = np.random.default_rng(seed)
    return rng.integers(0, 256, (size, size), dtype=np.uint8)


def texture(size=512, seed=7):
    # smoothed noise rescaled to full range: smooth areas plus soft edges
    rng = np.random.default_rng(seed)
    field = rng.standard_normal((size, size))
    taps = kernels.gaussian_taps(3.0, 9)
    sm = kernels.gaussian_smooth(field, taps)
    sm -= sm.min()
    sm *= 255.0 / sm.max()
    return np.rint(sm).astype(np.uint8)


def rings(size=512):
    c = (size - 1) / 2.0
    yy, xx = np.mgrid[0:size, 0:size]
    r = np.hypot(yy - c, xx - c)
    return np.rint(127.5 + 127.5 * np.sin(r / 6.0)).astype(np.uint8)


FIXTURES = {
    "gradient_h": lambda size=512: gradient(size, horizontal=True),
    "gradient_v": lambda size=512: gradient(size, horizontal=False),
    "checkerboard": checkerboard,
    "noise": noise,
    "texture": texture,
    "rings": rings,
}


def make(name, size=512):
    if name not in FIXTURES:
        raise ValueError(f"unknown fixture {name!r}, want one of {sorted(FIXTURES)}")
    return FIXTURES[name](size)
