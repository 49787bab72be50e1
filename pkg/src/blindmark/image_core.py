"""Grayscale image I/O and 128x128 macro-block partitioning.

Images are 2-D uint8 numpy arrays. PGM (P2 and P5) is read and written
natively; PNG goes through Pillow. Color inputs collapse to BT.601 luma
with proper rounding.
"""

import io
import os
from dataclasses import dataclass

import numpy as np

MACROBLOCK = 128

_LUMA = np.array([0.299, 0.587, 0.114])


@dataclass(frozen=True)
class MacroBlockGrid:
    """Partition geometry: blocks_x columns by blocks_y rows of 128x128."""
    blocks_x: int
    blocks_y: int
    block_size: int = MACROBLOCK

    @property
    def count(self):
        return self.blocks_x * self.blocks_y


def ensure_gray_image(arr):
    a = np.asarray(arr)
    if a.ndim != 2 or a.dtype != np.uint8 or a.size == 0:
        raise ValueError(
            f"expected a nonempty 2-D uint8 image, got shape {a.shape} dtype {a.dtype}")
    return a


def luma_from_rgb(rgb):
    """BT.601 weighted luma, rounded to nearest."""
    arr = np.asarray(rgb, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] < 3:
        raise ValueError(f"expected an (h, w, 3) array, got shape {arr.shape}")
    y = arr[:, :, 0] * _LUMA[0] + arr[:, :, 1] * _LUMA[1] + arr[:, :, 2] * _LUMA[2]
    return np.clip(np.rint(y), 0, 255).astype(np.uint8)


def _read_pgm(data):
    # P2/P5 with comment and whitespace tolerance
    pos = 0

    def token():
        nonlocal pos
        while pos < len(data):
            ch = data[pos:pos + 1]
            if ch == b"#":
                nl = data.find(b"\n", pos)
                pos = len(data) if nl < 0 else nl + 1
            elif ch.isspace():
                pos += 1
            else:
                break
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            ch = data[pos:pos + 1]
            if ch == b"#":
                break
            pos += 1
        if start == pos:
            raise ValueError("truncated PGM header")
        return data[start:pos]

    magic = token()
    if magic not in (b"P2", b"P5"):
        raise ValueError(f"not a PGM file (magic {magic!r})")
    w = int(token())
    h = int(token())
    maxval = int(token())
    if w <= 0 or h <= 0:
        raise ValueError(f"bad PGM dimensions {w}x{h}")
    if not 0 < maxval < 256:
        raise ValueError(f"unsupported PGM maxval {maxval}")
    if magic == b"P5":
        pos += 1  # single whitespace byte after maxval
        raster = data[pos:pos + w * h]
        if len(raster) < w * h:
            raise ValueError("truncated PGM raster")
        img = np.frombuffer(raster, np.uint8, count=w * h)
    else:
        vals = data[pos:].split()
        if len(vals) < w * h:
            raise ValueError("truncated PGM raster")
        img = np.array([int(v) for v in vals[:w * h]], np.uint8)
    return img.reshape(h, w).copy()


def _write_pgm(img, binary=True):
    h, w = img.shape
    header = f"P5\n{w} {h}\n255\n" if binary else f"P2\n{w} {h}\n255\n"
    if binary:
        return header.encode("ascii") + img.tobytes()
    body = "\n".join(" ".join(str(v) for v in row) for row in img.tolist())
    return header.encode("ascii") + body.encode("ascii") + b"\n"


def load_image(path):
    """Read a PGM or PNG file as a 2-D uint8 array.

    Color PNGs are converted to BT.601 luma. Anything else is rejected.
    """
    with open(path, "rb") as f:
        data = f.read()
    if len(data) == 0:
        raise ValueError(f"{path}: empty file")
    if data[:2] in (b"P2", b"P5"):
        return _read_pgm(data)
    if data[:8] == b"\x89PNG\r\n\x1a\n":
        from PIL import Image
        with Image.open(io.BytesIO(data)) as im:
            if im.mode == "L":
                return np.asarray(im, np.uint8).copy()
            rgb = im.convert("RGB")
            return luma_from_rgb(np.asarray(rgb))
    raise ValueError(f"{path}: unsupported image format (want PGM or PNG)")


def save_image(path, img):
    """Write a 2-D uint8 array as PGM or PNG, chosen by extension."""
    img = ensure_gray_image(img)
    ext = os.path.splitext(path)[1].lower()
    if ext in (".pgm", ""):
        payload = _write_pgm(img)
    elif ext == ".png":
        from PIL import Image
        buf = io.BytesIO()
        Image.fromarray(img, mode="L").save(buf, format="PNG")
        payload = buf.getvalue()
    else:
        raise ValueError(f"{path}: unsupported output extension {ext!r}")
    with open(path, "wb") as f:
        f.write(payload)


def partition(img):
    """Split into 128x128 macro-blocks, raster order. Dimensions must divide."""
    img = ensure_gray_image(img)
    h, w = img.shape
    if h % MACROBLOCK or w % MACROBLOCK:
        raise ValueError(
            f"image {w}x{h} is not a multiple of {MACROBLOCK} in both dimensions")
    grid = MacroBlockGrid(blocks_x=w // MACROBLOCK, blocks_y=h // MACROBLOCK)
    blocks = []
    for by in range(grid.blocks_y):
        for bx in range(grid.blocks_x):
            blocks.append(img[by * MACROBLOCK:(by + 1) * MACROBLOCK,
                              bx * MACROBLOCK:(bx + 1) * MACROBLOCK])
    return blocks, grid


def reassemble(blocks, grid):
    """Inverse of partition for the same grid."""
    if len(blocks) != grid.count:
        raise ValueError(f"expected {grid.count} blocks, got {len(blocks)}")
    bs = grid.block_size
    out = np.empty((grid.blocks_y * bs, grid.blocks_x * bs), np.uint8)
    i = 0
    for by in range(grid.blocks_y):
        for bx in range(grid.blocks_x):
            blk = np.asarray(blocks[i])
            if blk.shape != (bs, bs):
                raise ValueError(f"block {i} has shape {blk.shape}, want {(bs, bs)}")
            out[by * bs:(by + 1) * bs, bx * bs:(bx + 1) * bs] = blk
            i += 1
    return out
