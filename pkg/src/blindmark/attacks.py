"""Robustness attack battery: filters, noise, equalization, JPEG.

Every attack maps uint8 to uint8 of the same shape and is deterministic
given its parameters (stochastic ones take a seed).
"""

import io
from dataclasses import dataclass

import numpy as np

from . import kernels
from .image_core import ensure_gray_image

KINDS = ("median_filter", "salt_pepper", "gaussian_noise", "hist_equalize", "jpeg")


@dataclass(frozen=True)
class AttackSpec:
    kind: str
    kernel: int = 3
    density: float = 0.01
    variance: float = 0.003
    quality: int = 50
    seed: int = 0

    def validate(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown attack kind {self.kind!r}, want one of {KINDS}")
        if self.kind == "median_filter" and (self.kernel < 1 or self.kernel % 2 == 0):
            raise ValueError(f"median kernel must be odd and positive, got {self.kernel}")
        if self.kind == "salt_pepper" and not 0.0 <= self.density <= 1.0:
            raise ValueError(f"density must be in [0, 1], got {self.density}")
        if self.kind == "gaussian_noise" and self.variance < 0:
            raise ValueError(f"variance must be >= 0, got {self.variance}")
        if self.kind == "jpeg" and not 1 <= self.quality <= 100:
            raise ValueError(f"jpeg quality must be in [1, 100], got {self.quality}")
        return self

    def label(self):
        arg = {
            "median_filter": f"kernel={self.kernel}",
            "salt_pepper": f"density={self.density:g}",
            "gaussian_noise": f"variance={self.variance:g}",
            "hist_equalize": "",
            "jpeg": f"quality={self.quality}",
        }[self.kind]
        return f"{self.kind}({arg})"


def median_filter(img, kernel=3):
    img = ensure_gray_image(img)
    if kernel < 1 or kernel % 2 == 0:
        raise ValueError(f"median kernel must be odd and positive, got {kernel}")
    return kernels.median_filter(img, kernel)


def salt_pepper(img, density, seed=0):
    """Flip a `density` fraction of pixels to 0 or 255 by fair draw."""
    img = ensure_gray_image(img)
    if not 0.0 <= density <= 1.0:
        raise ValueError(f"density must be in [0, 1], got {density}")
    rng = np.random.default_rng(seed)
    hit = rng.random(img.shape) < density
    salt = rng.random(img.shape) < 0.5
    out = img.copy()
    out[hit & salt] = 255
    out[hit & ~salt] = 0
    return out


def gaussian_noise(img, variance, seed=0):
    """Additive white noise with the given variance on the [0, 1] scale."""
    img = ensure_gray_image(img)
    if variance < 0:
        raise ValueError(f"variance must be >= 0, got {variance}")
    rng = np.random.default_rng(seed)
    noisy = img / 255.0 + rng.standard_normal(img.shape) * np.sqrt(variance)
    return np.clip(np.rint(noisy * 255.0), 0, 255).astype(np.uint8)


def hist_equalize(img):
    """Global histogram equalization through the cumulative distribution."""
    img = ensure_gray_image(img)
    hist = np.bincount(img.ravel(), minlength=256)
    cdf = np.cumsum(hist) / img.size
    lut = np.clip(np.rint(255.0 * cdf), 0, 255).astype(np.uint8)
    return lut[img]


def jpeg(img, quality, seed=0):
    """Encode/decode through an in-memory JPEG at the given quality."""
    img = ensure_gray_image(img)
    if not 1 <= int(quality) <= 100:
        raise ValueError(f"jpeg quality must be in [1, 100], got {quality}")
    from PIL import Image
    buf = io.BytesIO()
    Image.fromarray(img, mode="L").save(buf, format="JPEG", quality=int(quality))
    buf.seek(0)
    with Image.open(buf) as decoded:
        return np.asarray(decoded.convert("L"), np.uint8).copy()


def apply_attack(img, spec):
    spec.validate()
    if spec.kind == "median_filter":
        return median_filter(img, spec.kernel)
    if spec.kind == "salt_pepper":
        return salt_pepper(img, spec.density, spec.seed)
    if spec.kind == "gaussian_noise":
        return gaussian_noise(img, spec.variance, spec.seed)
    if spec.kind == "hist_equalize":
        return hist_equalize(img)
    return jpeg(img, spec.quality)
