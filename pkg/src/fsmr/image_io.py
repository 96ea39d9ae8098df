"""Image and mask file handling.

Images travel through the library as float64 arrays in [0, 1], grayscale
``(H, W)`` or colour ``(H, W, 3)``.  Files are 8-bit PNG/PGM/PPM.  Masks
are stored as single-channel images with 0 for lost pixels and 255 for
valid ones.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

from .errors import InvalidArgumentError
from .patterns import LossMask


def to_float(array: np.ndarray) -> np.ndarray:
    """8-bit integer plane to float64 in [0, 1]."""
    return np.asarray(array, dtype=np.float64) / 255.0


def to_uint8(array: np.ndarray) -> np.ndarray:
    """Quantise a float plane to 8 bits: clamp to [0, 1], scale, round half
    to even.  This is the single quantisation point for all file output and
    for metric computation."""
    return np.rint(np.clip(np.asarray(array, dtype=np.float64), 0.0, 1.0) * 255.0).astype(np.uint8)


def load_image(path: str | Path) -> np.ndarray:
    """Read an image file as float64 in [0, 1]; grayscale stays 2-D, colour
    becomes (H, W, 3).  Alpha channels and palettes are flattened."""
    try:
        with Image.open(path) as img:
            if img.mode in ("1", "L", "I;16", "I"):
                img = img.convert("L")
            else:
                img = img.convert("RGB")
            return to_float(np.asarray(img))
    except FileNotFoundError:
        raise
    except OSError as exc:
        raise InvalidArgumentError(f"cannot read image {path}: {exc}") from exc


def save_image(array: np.ndarray, path: str | Path) -> None:
    """Quantise and write a float image; format follows the file suffix."""
    data = to_uint8(array)
    if data.ndim == 2:
        img = Image.fromarray(data, mode="L")
    elif data.ndim == 3 and data.shape[2] == 3:
        img = Image.fromarray(data, mode="RGB")
    else:
        raise InvalidArgumentError(f"cannot save array of shape {data.shape}")
    img.save(path)


def load_mask(path: str | Path, size: tuple[int, int] | None = None) -> LossMask:
    """Read a mask image: nonzero means valid.  If ``size`` is given the
    mask dimensions must match it."""
    with Image.open(path) as img:
        valid = np.asarray(img.convert("L")) > 0
    mask = LossMask(valid)
    if size is not None and mask.size != tuple(size):
        raise InvalidArgumentError(f"mask size {mask.size} does not match expected {tuple(size)}")
    return mask


def save_mask(mask: LossMask, path: str | Path) -> None:
    """Write a mask as a 1-bit image: 0 lost, 255 valid."""
    Image.fromarray(mask.valid).convert("1").save(path)
