"""Payload embedding and blind extraction.

A 256-bit payload is written 11 times into the detail subbands of a
512x512 image: each 8x8 tile of lh1, hl1, lh2, hl2 and hh2 carries one
bit in the relationship between the DCT coefficients at (6,4) and (4,6).
Extraction reads only the marked image; a majority vote over the 11
copies recovers each bit.
"""

from dataclasses import dataclass, field

import numpy as np

from . import image_core, psychovisual, transforms
from .psychovisual import THRESHOLD_FLOOR, PsychovisualParams

PAYLOAD_BITS = 256
SUBBAND_ORDER = ("lh1", "hl1", "lh2", "hl2", "hh2")
SLOTS_PER_MACROBLOCK = 176  # 64 + 64 + 16 + 16 + 16


@dataclass(frozen=True)
class EmbedParams:
    pos_a: tuple = (6, 4)
    pos_b: tuple = (4, 6)
    redundancy: int = 11
    subband_order: tuple = SUBBAND_ORDER
    magnitude_floor: float = 2.0
    adaptive: bool = True
    fixed_sf: float = 0.04
    psychovisual: PsychovisualParams = field(default_factory=PsychovisualParams)

    def validate(self):
        if tuple(self.pos_a) == tuple(self.pos_b):
            raise ValueError("pos_a and pos_b must differ")
        for pos in (self.pos_a, self.pos_b):
            if not (0 <= pos[0] < 8 and 0 <= pos[1] < 8):
                raise ValueError(f"coefficient position {pos} outside the 8x8 tile")
        if self.redundancy < 1 or self.redundancy % 2 == 0:
            raise ValueError(f"redundancy must be odd and positive, got {self.redundancy}")
        if self.magnitude_floor < 0:
            raise ValueError(f"magnitude_floor must be >= 0, got {self.magnitude_floor}")
        if not self.adaptive and self.fixed_sf < 0:
            raise ValueError(f"fixed_sf must be >= 0, got {self.fixed_sf}")
        if tuple(self.subband_order) != SUBBAND_ORDER:
            raise ValueError(f"unsupported subband order {self.subband_order}")
        self.psychovisual.validate()
        return self


# ---------------------------------------------------------------- payloads

def payload_from_hex(text):
    """64 hex chars -> 256-bit array; bit 0 is the MSB of the first digit."""
    text = text.strip()
    if len(text) != PAYLOAD_BITS // 4:
        raise ValueError(f"payload must be {PAYLOAD_BITS // 4} hex characters, got {len(text)}")
    try:
        raw = bytes.fromhex(text)
    except ValueError:
        raise ValueError(f"payload is not valid hexadecimal: {text!r}") from None
    return np.unpackbits(np.frombuffer(raw, np.uint8))


def payload_to_hex(bits):
    return np.packbits(as_payload(bits)).tobytes().hex()


def payload_from_bytes(raw):
    if len(raw) != PAYLOAD_BITS // 8:
        raise ValueError(f"payload must be {PAYLOAD_BITS // 8} bytes, got {len(raw)}")
    return np.unpackbits(np.frombuffer(bytes(raw), np.uint8))


def payload_to_bytes(bits):
    return np.packbits(as_payload(bits)).tobytes()


def random_payload(rng):
    return rng.integers(0, 2, PAYLOAD_BITS).astype(np.uint8)


def as_payload(bits):
    a = np.asarray(bits)
    if a.shape != (PAYLOAD_BITS,):
        raise ValueError(f"payload must have {PAYLOAD_BITS} bits, got shape {a.shape}")
    if not np.isin(a, (0, 1)).all():
        raise ValueError("payload bits must be 0 or 1")
    return a.astype(np.uint8)


# ---------------------------------------------------------------- slots

def capacity(grid):
    return grid.count * SLOTS_PER_MACROBLOCK


def assign_bit(slot_index, redundancy=11, payload_len=PAYLOAD_BITS):
    """Copy-major slot -> (bit_index, copy_index) map."""
    if not 0 <= slot_index < redundancy * payload_len:
        raise ValueError(
            f"slot {slot_index} outside capacity {redundancy * payload_len}")
    return slot_index % payload_len, slot_index // payload_len


def build_slot_map(grid, params=EmbedParams()):
    """Slot table: (macro_block, subband, tile) per slot, traversal order.

    Slots walk macro-blocks in raster order, subbands in params.subband_order,
    8x8 tiles in raster order inside each subband.
    """
    params.validate()
    tiles_per = {"lh1": 64, "hl1": 64, "lh2": 16, "hl2": 16, "hh2": 16}
    rows = []
    for mb in range(grid.count):
        for name in params.subband_order:
            for tile in range(tiles_per[name]):
                rows.append((mb, name, tile))
    return rows


# ----------------------------------------------------- coefficient pairs

def compute_threshold(c_vu, c_uv, sf):
    """T = sf * (|c_vu| + |c_uv|) + floor term, always positive."""
    if sf < 0:
        raise ValueError(f"sf must be >= 0, got {sf}")
    return sf * (abs(c_vu) + abs(c_uv)) + THRESHOLD_FLOOR


def embed_pair(c_vu, c_uv, bit, threshold, magnitude_floor=1.0):
    """Rewrite one coefficient pair so it decodes to bit.

    The favorable coefficient (c_vu for 0, c_uv for 1) must end up
    dominant. Three cases: already dominant by more than the threshold
    with matching signs (left alone), dominated by more than the
    threshold with matching signs (halve magnitudes, split signs), and
    everything else (keep magnitudes, split signs). Afterwards the
    decisive margin is floored at magnitude_floor so rounding to uint8
    cannot flip the decision.
    """
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit}")
    x, y = (c_uv, c_vu) if bit else (c_vu, c_uv)  # x is favorable
    same = (x >= 0.0) == (y >= 0.0)
    if same and x - y > threshold:
        if x - y < magnitude_floor:
            d = 0.5 * (magnitude_floor - (x - y))
            x, y = x + d, y - d
    elif same and y - x > threshold:
        x = max(abs(x) * 0.5, magnitude_floor)
        y = -max(abs(y) * 0.5, magnitude_floor)
    else:
        x = max(abs(x), magnitude_floor)
        y = -max(abs(y), magnitude_floor)
    return (y, x) if bit else (x, y)


def extract_pair(c_vu, c_uv):
    """Decode one pair: larger same-sign coefficient wins, sign breaks ties."""
    if (c_vu >= 0.0) == (c_uv >= 0.0):
        if c_vu > c_uv:
            return 0
        if c_uv > c_vu:
            return 1
    if c_vu < 0.0:
        return 1
    return 0


def embed_pairs(c_vu, c_uv, bits, thresholds, magnitude_floor=1.0):
    """Vectorized embed_pair over aligned arrays."""
    fav = bits.astype(np.bool_)
    x = np.where(fav, c_uv, c_vu)
    y = np.where(fav, c_vu, c_uv)
    same = (x >= 0.0) == (y >= 0.0)
    diff = x - y
    keep = same & (diff > thresholds)
    halve = same & (-diff > thresholds)
    d = np.where(keep & (diff < magnitude_floor),
                 0.5 * (magnitude_floor - diff), 0.0)
    xk, yk = x + d, y - d
    xh = np.maximum(np.abs(x) * 0.5, magnitude_floor)
    yh = -np.maximum(np.abs(y) * 0.5, magnitude_floor)
    xa = np.maximum(np.abs(x), magnitude_floor)
    ya = -np.maximum(np.abs(y), magnitude_floor)
    xf = np.where(keep, xk, np.where(halve, xh, xa))
    yf = np.where(keep, yk, np.where(halve, yh, ya))
    return np.where(fav, yf, xf), np.where(fav, xf, yf)


def extract_pairs(c_vu, c_uv):
    """Vectorized extract_pair over aligned arrays."""
    same = (c_vu >= 0.0) == (c_uv >= 0.0)
    one = np.where(same, c_uv > c_vu, c_vu < 0.0)
    return one.astype(np.uint8)


def majority_vote(votes, redundancy=11):
    """(payload_len, redundancy) vote matrix -> payload bits."""
    v = np.asarray(votes)
    if v.ndim != 2 or v.shape[1] != redundancy:
        raise ValueError(f"expected (*, {redundancy}) votes, got shape {v.shape}")
    return (v.sum(axis=1) * 2 > redundancy).astype(np.uint8)


# ---------------------------------------------------------------- pipeline

def _strength_per_block(img, grid, params):
    if not params.adaptive:
        return np.full(grid.count, float(params.fixed_sf))
    edges = psychovisual.canny_edges(img, params.psychovisual)
    stats = psychovisual.block_stats(img, edges, grid, params.psychovisual)
    return np.array([s.sf for s in stats])


def _check_capacity(grid, params):
    cap = capacity(grid)
    want = params.redundancy * PAYLOAD_BITS
    if cap != want:
        raise ValueError(
            f"image capacity {cap} slots != redundancy * payload = {want}; "
            f"need a 512x512 image")


def _mark_bands(bands, bits, sf, params):
    """Rewrite the carrier pairs of one macro-block's subbands, in place.

    bits holds one payload bit per slot of this macro-block in traversal
    order. Only the five carrier subbands are touched.
    """
    (ra, ca), (rb, cb) = params.pos_a, params.pos_b
    offset = 0
    for name in params.subband_order:
        plane = getattr(bands, name)
        coeffs = transforms.dct_tiles(plane)
        n = coeffs.shape[0]
        c_vu = coeffs[:, ra, ca].copy()
        c_uv = coeffs[:, rb, cb].copy()
        thr = sf * (np.abs(c_vu) + np.abs(c_uv)) + THRESHOLD_FLOOR
        new_vu, new_uv = embed_pairs(c_vu, c_uv, bits[offset:offset + n], thr,
                                     params.magnitude_floor)
        coeffs[:, ra, ca] = new_vu
        coeffs[:, rb, cb] = new_uv
        setattr(bands, name, transforms.idct_tiles(coeffs, plane.shape))
        offset += n
    return bands


def embed(img, payload, params=EmbedParams()):
    """Embed a 256-bit payload; returns the marked image, same shape."""
    params.validate()
    payload = as_payload(payload)
    blocks, grid = image_core.partition(img)
    _check_capacity(grid, params)
    sfs = _strength_per_block(img, grid, params)
    out = np.empty(img.shape, np.float64)
    bs = grid.block_size
    slot = 0
    for mb, block in enumerate(blocks):
        bands = transforms.dwt2_two_level(block.astype(np.float64))
        bits = payload[(slot + np.arange(SLOTS_PER_MACROBLOCK)) % PAYLOAD_BITS]
        _mark_bands(bands, bits, sfs[mb], params)
        by, bx = divmod(mb, grid.blocks_x)
        out[by * bs:(by + 1) * bs, bx * bs:(bx + 1) * bs] = \
            transforms.idwt2_two_level(bands)
        slot += SLOTS_PER_MACROBLOCK
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


def extract_votes(img, params=EmbedParams()):
    """Blind per-copy decisions: (payload, (256, redundancy) vote matrix)."""
    params.validate()
    blocks, grid = image_core.partition(img)
    _check_capacity(grid, params)
    (ra, ca), (rb, cb) = params.pos_a, params.pos_b
    decisions = np.empty(capacity(grid), np.uint8)
    slot = 0
    for block in blocks:
        bands = transforms.dwt2_two_level(block.astype(np.float64))
        for name in params.subband_order:
            coeffs = transforms.dct_tiles(getattr(bands, name))
            n = coeffs.shape[0]
            decisions[slot:slot + n] = extract_pairs(coeffs[:, ra, ca],
                                                     coeffs[:, rb, cb])
            slot += n
    votes = decisions.reshape(params.redundancy, PAYLOAD_BITS).T
    return majority_vote(votes, params.redundancy), votes


def extract(img, params=EmbedParams()):
    """Recover the payload from a marked image alone."""
    return extract_votes(img, params)[0]


def vote_confidence(votes):
    """Fraction of copies agreeing with the majority, per bit."""
    v = np.asarray(votes)
    ones = v.sum(axis=1)
    return np.maximum(ones, v.shape[1] - ones) / v.shape[1]
