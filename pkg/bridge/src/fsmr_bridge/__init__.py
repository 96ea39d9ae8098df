"""Array-in/array-out binding of the fsmr pipeline for preprocessing code.

A classifier pipeline that repairs and resizes its inputs before running
inference wants plain array calls, not files.  This package wraps the
fsmr engine in two functions:

* ``bridge_corrupt``   simulate transmission loss on an image array
* ``bridge_process``   corrupted array + validity mask -> target-size array

Arrays are row-major numpy buffers, ``uint8`` or ``float32``, shaped
``(H, W)``, ``(H, W, 1)`` or ``(H, W, 3)``.  Float input is clamped to
[0, 1] before processing.  Output keeps the input dtype and channel
layout; 8-bit output is bit-identical to what the ``fsmr`` CLI writes for
the same pixels, mask and configuration.  Bad dtypes raise ``TypeError``,
bad shapes or values raise ``ValueError``.

The functions keep no state between calls and are safe to call from
several threads at once; the long-running array work happens inside numpy
primitives, which release the interpreter lock.
"""

from __future__ import annotations

import dataclasses
import typing

import numpy as np

import fsmr

__version__ = fsmr.__version__

__all__ = ["bridge_corrupt", "bridge_process", "__version__"]

_PATTERN_FIELDS = frozenset(
    field.name for field in dataclasses.fields(fsmr.PatternSpec)) - {"kind", "seed"}


def _as_plane(array: object, name: str = "array") -> tuple[np.ndarray, np.dtype, bool]:
    """Validate an image array and lift it to the engine's float64 [0, 1]
    domain.  Returns (plane, input dtype, had a trailing length-1 axis)."""
    if not isinstance(array, np.ndarray):
        raise TypeError(f"{name} must be a numpy array, got {type(array).__name__}")
    if array.dtype not in (np.uint8, np.float32):
        raise TypeError(f"{name} dtype must be uint8 or float32, got {array.dtype}")
    squeezed = False
    if array.ndim == 3 and array.shape[-1] == 1:
        array = array[:, :, 0]
        squeezed = True
    if array.ndim not in (2, 3) or (array.ndim == 3 and array.shape[-1] != 3):
        raise ValueError(
            f"{name} must be (H, W), (H, W, 1) or (H, W, 3), got shape {array.shape}")
    if array.size == 0:
        raise ValueError(f"{name} has no pixels: shape {array.shape}")
    if array.dtype == np.uint8:
        plane = fsmr.to_float(array)
    else:
        if not np.isfinite(array).all():
            raise ValueError(f"{name} contains non-finite values")
        plane = np.clip(np.ascontiguousarray(array, dtype=np.float64), 0.0, 1.0)
    return plane, array.dtype, squeezed


def _restore(plane: np.ndarray, dtype: np.dtype, squeezed: bool) -> np.ndarray:
    """Drop back to the caller's dtype and channel layout."""
    if dtype == np.uint8:
        out = fsmr.to_uint8(plane)
    else:
        out = np.clip(plane, 0.0, 1.0).astype(np.float32)
    return out[:, :, None] if squeezed else out


def _pattern(pattern_spec: object, seed: object) -> fsmr.PatternSpec:
    if isinstance(pattern_spec, str):
        kind, fields = pattern_spec, {}
    elif isinstance(pattern_spec, typing.Mapping):
        fields = dict(pattern_spec)
        kind = fields.pop("kind", None)
        if kind is None:
            raise ValueError("pattern_spec mapping needs a 'kind' entry")
        if "seed" in fields:
            raise ValueError("pass the seed as the seed argument, not inside pattern_spec")
        unknown = sorted(set(fields) - _PATTERN_FIELDS)
        if unknown:
            raise ValueError(f"unknown pattern_spec keys: {unknown}")
    else:
        raise TypeError("pattern_spec must be a pattern name or a mapping, "
                        f"got {type(pattern_spec).__name__}")
    if kind not in fsmr.PATTERN_KINDS:
        raise ValueError(f"unknown pattern kind {kind!r}; choose from {fsmr.PATTERN_KINDS}")
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise TypeError(f"seed must be an int, got {type(seed).__name__}")
    try:
        # config_with_overrides supplies per-field type checking
        config = fsmr.config_with_overrides(
            fsmr.PipelineConfig(), {"pattern": kind, "seed": int(seed), **fields})
    except fsmr.InvalidArgumentError as exc:
        raise ValueError(str(exc)) from exc
    return config.pattern


def _mask(mask_array: object, plane_shape: tuple[int, int]) -> fsmr.LossMask:
    if not isinstance(mask_array, np.ndarray):
        raise TypeError(f"mask_array must be a numpy array, got {type(mask_array).__name__}")
    if mask_array.dtype not in (np.uint8, np.bool_):
        raise TypeError(f"mask_array dtype must be uint8 or bool, got {mask_array.dtype}")
    if mask_array.ndim != 2:
        raise ValueError(f"mask_array must be 2-D, got shape {mask_array.shape}")
    if mask_array.shape != tuple(plane_shape):
        raise ValueError(f"mask_array shape {mask_array.shape} does not match "
                         f"the image plane {tuple(plane_shape)}")
    try:
        return fsmr.LossMask(mask_array != 0)
    except fsmr.DegenerateInputError as exc:
        raise ValueError(str(exc)) from exc


def _size(target_size: object) -> tuple[int, int]:
    try:
        width, height = target_size  # type: ignore[misc]
    except (TypeError, ValueError):
        raise TypeError(f"target_size must be a (width, height) pair, "
                        f"got {target_size!r}") from None
    for value in (width, height):
        if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
            raise TypeError(f"target_size entries must be ints, got {value!r}")
        if value <= 0:
            raise ValueError(f"target_size must be positive, got {target_size!r}")
    return int(width), int(height)


def bridge_corrupt(array: np.ndarray, pattern_spec: object,
                   seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Simulate transmission loss on an image array.

    ``pattern_spec`` is a pattern name (``"block"``, ``"line"``, ``"rand"``,
    ``"none"``) or a mapping with a ``kind`` entry plus pattern fields such
    as ``rand_p`` or ``block_loss``.  Returns ``(corrupted, mask)``: the
    image in the input dtype with lost pixels zeroed, and a uint8 ``(H, W)``
    mask holding 255 where the pixel survived and 0 where it was lost.
    The same spec and seed always produce the same mask.
    """
    plane, dtype, squeezed = _as_plane(array)
    spec = _pattern(pattern_spec, seed)
    try:
        corrupted, mask = fsmr.corrupt(plane, spec)
    except (fsmr.InvalidArgumentError, fsmr.DegenerateInputError) as exc:
        raise ValueError(str(exc)) from exc
    mask_array = np.where(mask.valid, 255, 0).astype(np.uint8)
    return _restore(corrupted, dtype, squeezed), mask_array


def bridge_process(array: np.ndarray, mask_array: np.ndarray, method: str,
                   target_size: tuple[int, int],
                   config_overrides: typing.Mapping[str, object] | None = None) -> np.ndarray:
    """Turn a corrupted array plus validity mask into a target-size image.

    ``mask_array`` is ``(H, W)`` uint8 or bool, nonzero where the input
    pixel is valid.  ``method`` is one of ``lin``, ``cub``, ``fsr``,
    ``fsmr``; ``target_size`` is ``(width, height)``.  ``config_overrides``
    maps flat configuration keys (the same names the CLI accepts) to
    values; the explicit ``method`` and ``target_size`` arguments win over
    entries setting the same fields.
    """
    plane, dtype, squeezed = _as_plane(array)
    mask = _mask(mask_array, plane.shape[:2])
    if method not in fsmr.METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {fsmr.METHODS}")
    width, height = _size(target_size)
    try:
        config = fsmr.config_with_overrides(
            fsmr.PipelineConfig(), dict(config_overrides or {}))
        config = fsmr.config_with_overrides(
            config, {"method": method, "target_width": width, "target_height": height})
        result = fsmr.run(plane, mask, config)
    except (fsmr.InvalidArgumentError, fsmr.DegenerateInputError) as exc:
        raise ValueError(str(exc)) from exc
    return _restore(result, dtype, squeezed)
