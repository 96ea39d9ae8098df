"""Deterministic transmission-loss masks: regular squares, horizontal
bands, and independent random pixel drops.

All three generators are pure functions of their parameters.  The random
pattern uses a fixed, documented counter-based PRNG rather than the
platform default so the same ``(size, p, seed)`` triple produces the same
mask on every platform and numpy version.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, InvalidArgumentError

# splitmix64 constants (Steele, Lea & Flood's 64-bit mixer).
_GOLDEN_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX_1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX_2 = np.uint64(0x94D049BB133111EB)


@dataclass
class LossMask:
    """Per-pixel validity plane for one image size.

    ``valid`` is a boolean ``(height, width)`` array, ``True`` where the
    pixel survived transmission.  At least one pixel must be valid.
    """

    valid: np.ndarray

    def __post_init__(self) -> None:
        self.valid = np.asarray(self.valid, dtype=bool)
        if self.valid.ndim != 2:
            raise InvalidArgumentError("mask plane must be 2-D")
        if not self.valid.any():
            raise DegenerateInputError("mask leaves no valid pixel")

    @property
    def size(self) -> tuple[int, int]:
        """(width, height) of the plane."""
        h, w = self.valid.shape
        return (w, h)

    @property
    def loss_fraction(self) -> float:
        """Invalid-pixel count over total, recomputed from the plane."""
        return float(np.count_nonzero(~self.valid)) / self.valid.size

    def all_valid(self) -> bool:
        return bool(self.valid.all())


def make_block_mask(size: tuple[int, int], lost_block: int = 16,
                    stride: int = 32, offset: int = 8) -> LossMask:
    """Square ``lost_block x lost_block`` losses repeating at ``stride``.

    Squares start at ``offset`` in both axes and are clipped at the image
    borders.  ``lost_block`` must be smaller than ``stride`` so valid
    material remains between the losses.
    """
    w, h = _check_size(size)
    if not (0 < lost_block < stride):
        raise InvalidArgumentError(
            f"need 0 < lost_block < stride, got {lost_block} / {stride}")
    cols = ((np.arange(w) - offset) % stride) < lost_block
    rows = ((np.arange(h) - offset) % stride) < lost_block
    # offset shifts the repeating phase; indices before the first square
    # must not wrap into a loss, hence the explicit >= offset clip
    cols &= np.arange(w) >= offset
    rows &= np.arange(h) >= offset
    invalid = np.outer(rows, cols)
    return LossMask(~invalid)


def make_line_mask(size: tuple[int, int], line_height: int = 4,
                   stride: int = 16, offset: int = 0) -> LossMask:
    """Full-width horizontal bands of ``line_height`` rows every ``stride``."""
    w, h = _check_size(size)
    if not (0 < line_height < stride):
        raise InvalidArgumentError(
            f"need 0 < line_height < stride, got {line_height} / {stride}")
    rows = ((np.arange(h) - offset) % stride) < line_height
    rows &= np.arange(h) >= offset
    invalid = np.repeat(rows[:, None], w, axis=1)
    return LossMask(~invalid)


def make_rand_mask(size: tuple[int, int], p: float = 0.25, seed: int = 0) -> LossMask:
    """Each pixel lost independently with probability ``p``.

    Pixel ``i`` (row-major) is lost iff ``u_i < p`` where ``u_i`` is the
    ``i``-th splitmix64 variate of ``seed`` mapped to ``[0, 1)``; see
    :func:`splitmix64_unit` for the exact bit-level definition.  The result
    is reproducible bit-for-bit across platforms.
    """
    w, h = _check_size(size)
    if not (0.0 <= p < 1.0):
        raise InvalidArgumentError(f"loss probability must lie in [0, 1), got {p}")
    u = splitmix64_unit(seed, w * h)
    invalid = (u < p).reshape(h, w)
    return LossMask(~invalid)


def splitmix64(seed: int, count: int) -> np.ndarray:
    """First ``count`` outputs of splitmix64 for ``seed``, as uint64.

    Output ``i`` (0-based) is ``mix(seed + (i + 1) * 0x9E3779B97F4A7C15)``
    with all arithmetic modulo 2**64 and

        mix(z): z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
                z ^= z >> 27; z *= 0x94D049BB133111EB;
                z ^= z >> 31; return z

    This matches the canonical splitmix64 reference sequence and, being
    counter-based, is trivially splittable and order-independent.
    """
    with np.errstate(over="ignore"):
        counters = np.arange(1, count + 1, dtype=np.uint64)
        z = np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + counters * _GOLDEN_GAMMA
        z ^= z >> np.uint64(30)
        z *= _MIX_1
        z ^= z >> np.uint64(27)
        z *= _MIX_2
        z ^= z >> np.uint64(31)
    return z


def splitmix64_unit(seed: int, count: int) -> np.ndarray:
    """splitmix64 outputs mapped to doubles in [0, 1): top 53 bits / 2**53."""
    bits = splitmix64(seed, count) >> np.uint64(11)
    return bits.astype(np.float64) * (1.0 / (1 << 53))


def _check_size(size: tuple[int, int]) -> tuple[int, int]:
    w, h = size
    if w < 1 or h < 1:
        raise InvalidArgumentError(f"mask size must be positive, got {size}")
    return int(w), int(h)
