"""Quality and accuracy bookkeeping: PSNR, SSIM, classification accuracy.

Rasters are expected in the normalised [0, 1] range, so the PSNR peak is
1.0.  SSIM follows the standard constants (K1 = 0.01, K2 = 0.03) with an
8x8 uniform sliding window evaluated at every fully interior position.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidArgumentError

_LUMA_WEIGHTS = (0.299, 0.587, 0.114)


def luma(image: np.ndarray) -> np.ndarray:
    """Luma-weighted average of an RGB raster; grayscale passes through."""
    image = np.asarray(image, dtype=np.float64)
    if image.ndim == 2:
        return image
    if image.ndim == 3 and image.shape[2] == 3:
        r, g, b = _LUMA_WEIGHTS
        return r * image[:, :, 0] + g * image[:, :, 1] + b * image[:, :, 2]
    if image.ndim == 3 and image.shape[2] == 1:
        return image[:, :, 0]
    raise InvalidArgumentError(f"expected (H, W) or (H, W, 3) raster, got {image.shape}")


def psnr(a: np.ndarray, b: np.ndarray, peak: float = 1.0) -> float:
    """Peak signal-to-noise ratio in dB; identical inputs give ``inf``."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise InvalidArgumentError(f"shape mismatch {a.shape} vs {b.shape}")
    mse = float(np.mean((a - b) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(peak * peak / mse)


def _window_sums(plane: np.ndarray, win: int) -> np.ndarray:
    """Sliding ``win x win`` box sums at every valid position (integral image)."""
    padded = np.zeros((plane.shape[0] + 1, plane.shape[1] + 1), dtype=np.float64)
    np.cumsum(np.cumsum(plane, axis=0), axis=1, out=padded[1:, 1:])
    return (padded[win:, win:] - padded[:-win, win:]
            - padded[win:, :-win] + padded[:-win, :-win])


def ssim(a: np.ndarray, b: np.ndarray, window: int = 8,
         k1: float = 0.01, k2: float = 0.03, peak: float = 1.0) -> float:
    """Mean structural similarity over all sliding window positions."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise InvalidArgumentError(f"shape mismatch {a.shape} vs {b.shape}")
    if a.ndim != 2:
        raise InvalidArgumentError("ssim expects single-channel planes; use luma() first")
    if min(a.shape) < window:
        raise InvalidArgumentError(f"image smaller than the {window}x{window} ssim window")
    n = float(window * window)
    mu_a = _window_sums(a, window) / n
    mu_b = _window_sums(b, window) / n
    var_a = _window_sums(a * a, window) / n - mu_a * mu_a
    var_b = _window_sums(b * b, window) / n - mu_b * mu_b
    cov = _window_sums(a * b, window) / n - mu_a * mu_b
    c1 = (k1 * peak) ** 2
    c2 = (k2 * peak) ** 2
    score = ((2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)
             / ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2)))
    return float(score.mean())


@dataclass(frozen=True)
class AccuracyReport:
    """Correct/false counts and their ratio."""

    n_correct: int
    n_false: int

    @property
    def accuracy(self) -> float:
        return self.n_correct / (self.n_correct + self.n_false)


def accuracy(pred_labels: Sequence, true_labels: Sequence) -> AccuracyReport:
    """Classification accuracy: correct predictions over all predictions."""
    pred = list(pred_labels)
    true = list(true_labels)
    if len(pred) != len(true):
        raise InvalidArgumentError(
            f"label counts differ: {len(pred)} predictions vs {len(true)} truths")
    if not pred:
        raise InvalidArgumentError("accuracy needs at least one label pair")
    correct = sum(1 for p, t in zip(pred, true) if p == t)
    return AccuracyReport(n_correct=correct, n_false=len(pred) - correct)
