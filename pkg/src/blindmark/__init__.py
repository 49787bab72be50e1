"""Blind robust grayscale image watermarking.

256-bit payloads ride in the mid/high-frequency DWT+DCT coefficients of
512x512 images, with per-block strength driven by edge density and
brightness. Extraction needs only the marked image.
"""

from .attacks import AttackSpec, apply_attack
from .codec import (EmbedParams, embed, extract, extract_votes,
                    payload_from_bytes, payload_from_hex, payload_to_bytes,
                    payload_to_hex, random_payload)
from .config import BenchSettings, ToolkitConfig, load_config, save_config
from .image_core import load_image, partition, reassemble, save_image
from .kernels import BACKEND
from .metrics import ber, nc, psnr, ssim
from .psychovisual import BlockStats, PsychovisualParams, block_stats, canny_edges, strength_factor

__version__ = "0.1.0"

__all__ = [
    "AttackSpec", "apply_attack",
    "EmbedParams", "embed", "extract", "extract_votes",
    "payload_from_bytes", "payload_from_hex", "payload_to_bytes",
    "payload_to_hex", "random_payload",
    "BenchSettings", "ToolkitConfig", "load_config", "save_config",
    "load_image", "partition", "reassemble", "save_image",
    "BACKEND",
    "ber", "nc", "psnr", "ssim",
    "BlockStats", "PsychovisualParams", "block_stats", "canny_edges",
    "strength_factor",
    "__version__",
]
