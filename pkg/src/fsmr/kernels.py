"""Classical bilinear/bicubic baselines for the two roles they play here:
separable resizing, and axial gap interpolation across lost pixels.

The resize path is a standard separable convolution resampler.  The
reconstruction path fills each lost pixel from its nearest valid row and
column neighbours — 1-D linear or cubic across the gap, averaging the
horizontal and vertical estimates where both exist.  Framework resize ops
have no notion of holes, so this axial scheme is the natural way to press
the same kernels into reconstruction service; it produces the streaky,
block-revealing artifacts such baselines are known for.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import distance_transform_edt

from .errors import InvalidArgumentError
from .patterns import LossMask

_KINDS = ("bilinear", "bicubic")


@dataclass(frozen=True)
class KernelSpec:
    """Interpolation kernel family and its sharpness parameter.

    ``bicubic_a`` is the classic cubic-convolution free parameter; -0.5 is
    the Catmull-Rom-like value common machine-learning frameworks default
    to.  Both kernels have unit DC gain: at any sampling phase the tap
    weights sum to 1.
    """

    kind: str = "bicubic"
    bicubic_a: float = -0.5

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise InvalidArgumentError(f"unknown kernel kind {self.kind!r}")

    @property
    def radius(self) -> int:
        return 1 if self.kind == "bilinear" else 2

    @property
    def min_source(self) -> int:
        return 2 if self.kind == "bilinear" else 4

    def weight(self, t) -> np.ndarray:
        """Kernel value at signed offset(s) ``t`` from the sample point."""
        t = np.abs(np.asarray(t, dtype=np.float64))
        if self.kind == "bilinear":
            return np.maximum(0.0, 1.0 - t)
        a = self.bicubic_a
        near = ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0
        far = a * (((t - 5.0) * t + 8.0) * t - 4.0)
        return np.where(t <= 1.0, near, np.where(t <= 2.0, far, 0.0))


def _source_positions(n_src: int, n_dst: int, align_corners: bool) -> np.ndarray:
    """Continuous source coordinate of every target index along one axis."""
    idx = np.arange(n_dst, dtype=np.float64)
    if align_corners:
        if n_src < 2 or n_dst < 2:
            raise InvalidArgumentError(
                "align-corners resize needs source and target >= 2 per axis")
        return idx * (n_src - 1) / (n_dst - 1)
    return (idx + 0.5) * n_src / n_dst - 0.5


def _axis_stretch(n_src: int, n_dst: int, align_corners: bool) -> float:
    """Kernel stretch factor for antialiased downscaling: the slope of the
    coordinate map, never below 1."""
    if align_corners:
        return max(1.0, (n_src - 1) / (n_dst - 1))
    return max(1.0, n_src / n_dst)


def resize_matrix(n_src: int, n_dst: int, kernel: KernelSpec,
                  align_corners: bool = True, antialias: bool = False) -> np.ndarray:
    """Dense 1-D resampling operator (n_dst x n_src), clamp-to-edge.

    With ``antialias`` the kernel footprint is stretched by the downscale
    factor so the operator low-passes before decimating, the way Pillow and
    friends resize.  Weights are normalized per output position.
    """
    positions = _source_positions(n_src, n_dst, align_corners)
    stretch = _axis_stretch(n_src, n_dst, align_corners) if antialias else 1.0
    radius = kernel.radius * stretch
    base = np.floor(positions - radius).astype(np.int64) + 1
    n_taps = int(np.ceil(2.0 * radius))
    taps = base[:, None] + np.arange(n_taps)[None, :]
    weights = kernel.weight((taps - positions[:, None]) / stretch)
    weights /= weights.sum(axis=1, keepdims=True)
    h = np.zeros((n_dst, n_src), dtype=np.float64)
    rows = np.repeat(np.arange(n_dst), n_taps)
    np.add.at(h, (rows, np.clip(taps, 0, n_src - 1).ravel()), weights.ravel())
    return h


def resize(image: np.ndarray, target_size: tuple[int, int], kernel: KernelSpec,
           align_corners: bool = True, antialias: bool = False) -> np.ndarray:
    """Separable convolution resize of a 2-D or 3-D (H, W[, C]) raster."""
    image = np.asarray(image, dtype=np.float64)
    if image.ndim not in (2, 3):
        raise InvalidArgumentError("image must be 2-D or 3-D (H, W[, C])")
    src_h, src_w = image.shape[:2]
    dst_w, dst_h = int(target_size[0]), int(target_size[1])
    if min(src_h, src_w) < kernel.min_source:
        raise InvalidArgumentError(
            f"{kernel.kind} resize needs a source of at least "
            f"{kernel.min_source} pixels per axis, got {src_w}x{src_h}")
    h_rows = resize_matrix(src_h, dst_h, kernel, align_corners, antialias)
    h_cols = resize_matrix(src_w, dst_w, kernel, align_corners, antialias)
    if image.ndim == 2:
        return h_rows @ image @ h_cols.T
    out = np.empty((dst_h, dst_w, image.shape[2]), dtype=np.float64)
    for c in range(image.shape[2]):
        out[:, :, c] = h_rows @ image[:, :, c] @ h_cols.T
    return out


# ---------------------------------------------------------------------------
# Axial gap reconstruction
# ---------------------------------------------------------------------------


def _lagrange4(x0, x1, x2, x3, y0, y1, y2, y3, x):
    """Cubic Lagrange interpolation through four scattered 1-D points."""
    t0 = y0 * ((x - x1) * (x - x2) * (x - x3)) / ((x0 - x1) * (x0 - x2) * (x0 - x3))
    t1 = y1 * ((x - x0) * (x - x2) * (x - x3)) / ((x1 - x0) * (x1 - x2) * (x1 - x3))
    t2 = y2 * ((x - x0) * (x - x1) * (x - x3)) / ((x2 - x0) * (x2 - x1) * (x2 - x3))
    t3 = y3 * ((x - x0) * (x - x1) * (x - x2)) / ((x3 - x0) * (x3 - x1) * (x3 - x2))
    return t0 + t1 + t2 + t3


def _fill_lines(plane: np.ndarray, valid: np.ndarray, cubic: bool) -> np.ndarray:
    """Per-row estimates for lost pixels; NaN where a row has no valid pixel.

    Linear mode interpolates between the flanking valid samples and extends
    the edge value into one-sided gaps.  Cubic mode runs a 4-point Lagrange
    polynomial through the two nearest valid samples on each side, falling
    back to linear where fewer support points exist.
    """
    h, w = plane.shape
    out = np.full((h, w), np.nan)
    cols = np.arange(w, dtype=np.float64)
    for r in range(h):
        vmask = valid[r]
        if vmask.all():
            continue
        xp = np.nonzero(vmask)[0]
        if len(xp) == 0:
            continue
        fp = plane[r, xp]
        lost = np.nonzero(~vmask)[0]
        est = np.interp(cols[lost], xp, fp)
        if cubic and len(xp) >= 4:
            j = np.searchsorted(xp, lost)
            ok = (j >= 2) & (j <= len(xp) - 2)
            if ok.any():
                jj = j[ok]
                est[ok] = _lagrange4(
                    xp[jj - 2], xp[jj - 1], xp[jj], xp[jj + 1],
                    fp[jj - 2], fp[jj - 1], fp[jj], fp[jj + 1],
                    cols[lost[ok]])
        out[r, lost] = est
    return out


def interp_reconstruct(image: np.ndarray, mask: LossMask, kernel: KernelSpec,
                       *, full_output: bool = False):
    """Fill lost pixels by 1-D interpolation along rows and columns.

    Each lost pixel receives a horizontal estimate from the nearest valid
    pixels left/right and a vertical one from above/below; where both
    exist they are averaged.  Pixels whose entire row and column are lost
    fall back to the nearest valid pixel value; their count is reported in
    the optional info dict.  Valid pixels pass through untouched.
    """
    image = np.asarray(image, dtype=np.float64)
    valid = mask.valid
    if image.shape[:2] != valid.shape:
        raise InvalidArgumentError("image and mask dimensions differ")
    planes = image[:, :, None] if image.ndim == 2 else image
    cubic = kernel.kind == "bicubic"
    lost = ~valid
    # rows/columns devoid of valid pixels leave orphans that no axial
    # estimate can reach; those copy the nearest valid pixel instead
    orphan = lost & ~valid.any(axis=1)[:, None] & ~valid.any(axis=0)[None, :]
    if orphan.any():
        _, (near_y, near_x) = distance_transform_edt(lost, return_indices=True)
    out = planes.copy()
    for c in range(planes.shape[2]):
        plane = planes[:, :, c]
        horiz = _fill_lines(plane, valid, cubic)
        vert = _fill_lines(plane.T, valid.T, cubic).T
        both = ~np.isnan(horiz) & ~np.isnan(vert)
        filled = np.where(both, 0.5 * (horiz + vert),
                          np.where(np.isnan(horiz), vert, horiz))
        covered = lost & ~orphan
        out[:, :, c][covered] = filled[covered]
        if orphan.any():
            out[:, :, c][orphan] = plane[near_y[orphan], near_x[orphan]]
    result = out[:, :, 0] if image.ndim == 2 else out
    if full_output:
        return result, {"nearest_fallback_pixels": int(np.count_nonzero(orphan))}
    return result
