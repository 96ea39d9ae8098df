"""Geometry layer: maps source pixels onto target-plane mesh positions,
partitions the target plane into bordered blocks, and drives the sparse
model engine per block to assemble resampled or reconstructed rasters.

Two entry points share the machinery:

* :func:`fsmr_resample` — joint reconstruction and resizing.  Valid source
  pixels land on real-valued mesh positions in the target plane; each
  target block models its scattered samples and is evaluated on its
  interior integer pixels.
* :func:`fsr_reconstruct` — the grid special case (identity mesh).  Mesh
  positions coincide with grid positions, so valid pixels can be copied
  through and only lost pixels take model values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInputError, InvalidArgumentError
from .model import ModelConfig, SampleSet, build_dictionary, evaluate_model, generate_model
from .patterns import LossMask

_AFFINE = "affine"
_RESIZE = "resize"


@dataclass(frozen=True)
class MeshMap:
    """Forward map from source pixel indices to target-plane coordinates.

    The resize kind defaults to the align-corners convention: source corner
    pixels map exactly onto target corner pixels.  The half-pixel-centre
    convention is available for parity with ecosystems that use it.  The
    affine kind applies a 2x3 matrix to ``(m, n, 1)``.
    """

    source_size: tuple[int, int]
    target_size: tuple[int, int]
    kind: str = _RESIZE
    align_corners: bool = True
    matrix: tuple[float, ...] | None = None

    def forward(self, m, n):
        """Target coordinates ``(x, y)`` of source pixel indices ``(m, n)``."""
        m = np.asarray(m, dtype=np.float64)
        n = np.asarray(n, dtype=np.float64)
        if self.kind == _AFFINE:
            a = np.asarray(self.matrix, dtype=np.float64).reshape(2, 3)
            x = a[0, 0] * m + a[0, 1] * n + a[0, 2]
            y = a[1, 0] * m + a[1, 1] * n + a[1, 2]
            return x, y
        ws, hs = self.source_size
        wt, ht = self.target_size
        if self.align_corners:
            return m * ((wt - 1) / (ws - 1)), n * ((ht - 1) / (hs - 1))
        return (m + 0.5) * (wt / ws) - 0.5, (n + 0.5) * (ht / hs) - 0.5

    @property
    def is_identity(self) -> bool:
        """True when every source pixel maps exactly onto the same grid index."""
        return self.kind == _RESIZE and self.source_size == self.target_size


def build_mesh(source_size: tuple[int, int], target_size: tuple[int, int],
               align_corners: bool = True) -> MeshMap:
    """Resize mesh between two pixel grids."""
    ws, hs = source_size
    wt, ht = target_size
    if align_corners and (ws < 2 or hs < 2 or wt < 2 or ht < 2):
        raise InvalidArgumentError(
            f"align-corners mesh needs all dimensions >= 2, got {source_size} -> {target_size}")
    if min(ws, hs, wt, ht) < 1:
        raise InvalidArgumentError("mesh dimensions must be positive")
    return MeshMap((int(ws), int(hs)), (int(wt), int(ht)), align_corners=align_corners)


def affine_mesh(source_size: tuple[int, int], target_size: tuple[int, int],
                matrix) -> MeshMap:
    """Mesh under a general 2x3 affine map of source pixel indices."""
    a = np.asarray(matrix, dtype=np.float64)
    if a.shape != (2, 3):
        raise InvalidArgumentError(f"affine matrix must be 2x3, got {a.shape}")
    if abs(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]) < 1e-12:
        raise InvalidArgumentError("affine matrix is singular")
    return MeshMap(tuple(map(int, source_size)), tuple(map(int, target_size)),
                   kind=_AFFINE, matrix=tuple(a.ravel().tolist()))


@dataclass(frozen=True)
class Block:
    """One tile of the target plane: interior rectangle plus support border.

    ``interior`` is ``(x0, y0, x1, y1)`` half-open in target pixel indices.
    The support spans the interior extended by ``border`` on every side;
    ``support_origin`` can be negative near the plane edges.  Sample and
    evaluation coordinates are support-local: target coordinate minus
    ``support_origin``.
    """

    interior: tuple[int, int, int, int]
    border: int

    @property
    def support_origin(self) -> tuple[int, int]:
        x0, y0, _, _ = self.interior
        return (x0 - self.border, y0 - self.border)

    @property
    def support_size(self) -> tuple[int, int]:
        x0, y0, x1, y1 = self.interior
        return (x1 - x0 + 2 * self.border, y1 - y0 + 2 * self.border)

    def widened(self, extra: int) -> "Block":
        return Block(self.interior, self.border + extra)


@dataclass(frozen=True)
class BlockLayout:
    """Partition of the target plane into non-overlapping block interiors.

    Interiors tile the plane exactly; supports overlap by construction.
    Edge blocks may have interiors smaller than ``block_size``.
    """

    target_size: tuple[int, int]
    block_size: int
    border: int
    blocks: tuple[Block, ...]


def build_layout(target_size: tuple[int, int], block_size: int, border: int) -> BlockLayout:
    w, h = target_size
    if w < 1 or h < 1 or block_size < 1 or border < 0:
        raise InvalidArgumentError("invalid layout geometry")
    blocks = []
    for y0 in range(0, h, block_size):
        for x0 in range(0, w, block_size):
            interior = (x0, y0, min(x0 + block_size, w), min(y0 + block_size, h))
            blocks.append(Block(interior, border))
    return BlockLayout((w, h), block_size, border, tuple(blocks))


@dataclass
class RunInfo:
    """Per-run metadata: blocks that needed special handling."""

    widened_blocks: list[tuple[tuple[int, int, int, int], int]] = field(default_factory=list)
    modelled_blocks: int = 0
    copied_pixels: int = 0


class _MeshScatter:
    """Valid source pixels projected onto the target plane, ready to be
    binned into block supports.

    Pixels are kept in row-major source order so every per-block subset
    inherits a deterministic ordering.
    """

    def __init__(self, mask: LossMask, mesh: MeshMap):
        if mask.size != mesh.source_size:
            raise InvalidArgumentError(
                f"mask size {mask.size} does not match mesh source {mesh.source_size}")
        src_rows, src_cols = np.nonzero(mask.valid)
        self.src_rows = src_rows
        self.src_cols = src_cols
        self.tx, self.ty = mesh.forward(src_cols, src_rows)

    def __len__(self) -> int:
        return len(self.src_rows)

    def in_support(self, block: Block) -> np.ndarray:
        ox, oy = block.support_origin
        mx, my = block.support_size
        return ((self.tx >= ox) & (self.tx < ox + mx)
                & (self.ty >= oy) & (self.ty < oy + my))

    def sample_set(self, block: Block, plane: np.ndarray,
                   selection: np.ndarray) -> SampleSet:
        ox, oy = block.support_origin
        x0, y0, x1, y1 = block.interior
        return SampleSet(
            xs=self.tx[selection] - ox,
            ys=self.ty[selection] - oy,
            values=plane[self.src_rows[selection], self.src_cols[selection]],
            support_weights=np.ones(int(np.count_nonzero(selection))),
            block_size=max(x1 - x0, y1 - y0),
            border=block.border,
        )


def scatter_valid_pixels(image: np.ndarray, mask: LossMask, mesh: MeshMap,
                         layout: BlockLayout) -> list[SampleSet]:
    """Deposit every valid source pixel into each block support containing
    its mesh coordinate.  Returns one SampleSet per layout block, in block
    order; blocks may come back empty."""
    plane = np.asarray(image, dtype=np.float64)
    if plane.ndim != 2:
        raise InvalidArgumentError("scatter_valid_pixels expects a single channel")
    if (plane.shape[1], plane.shape[0]) != mesh.source_size:
        raise InvalidArgumentError("image dimensions do not match the mesh source size")
    scatter = _MeshScatter(mask, mesh)
    out = []
    for block in layout.blocks:
        selection = scatter.in_support(block)
        out.append(scatter.sample_set(block, plane, selection))
    return out


def _interior_targets(block: Block, lost_plane: np.ndarray | None):
    """Support-local coordinates of the interior pixels to evaluate.

    With ``lost_plane`` given (grid case) only lost interior pixels are
    evaluated; otherwise all of them.  Returns local xs, ys and the global
    (row, col) index arrays for assembly.
    """
    x0, y0, x1, y1 = block.interior
    cols, rows = np.meshgrid(np.arange(x0, x1), np.arange(y0, y1))
    cols = cols.ravel()
    rows = rows.ravel()
    if lost_plane is not None:
        keep = lost_plane[rows, cols]
        cols = cols[keep]
        rows = rows[keep]
    ox, oy = block.support_origin
    return cols - ox, rows - oy, rows, cols


def _block_model_config(config: ModelConfig, support: tuple[int, int]) -> ModelConfig:
    return ModelConfig(
        iterations=config.iterations,
        window_decay=config.window_decay,
        spectral_decay=config.spectral_decay,
        compensation=config.compensation,
        energy_floor=config.energy_floor,
        dictionary_size=support,
    )


def fsmr_resample(image: np.ndarray, mask: LossMask, target_size: tuple[int, int],
                  model_config: ModelConfig | None = None, *,
                  block_size: int = 4, border: int = 4, min_samples: int = 4,
                  align_corners: bool = True, keep_valid: bool = True,
                  full_output: bool = False):
    """Jointly reconstruct losses and resize to ``target_size``.

    Per channel and per target block, the scattered valid samples inside
    the block support feed the sparse model engine, and the model is
    evaluated at the block's interior integer pixels.  Interiors are
    stitched without overlap.  Blocks whose support holds fewer than
    ``min_samples`` samples are retried with the support widened by
    ``border`` until enough samples appear; such blocks are flagged in the
    run info.

    When the mesh is the identity and ``keep_valid`` is set, valid pixels
    are copied through unchanged and only lost pixels take model values.
    """
    image = np.asarray(image, dtype=np.float64)
    if image.ndim not in (2, 3):
        raise InvalidArgumentError("image must be 2-D or 3-D (H, W[, C])")
    planes = image[:, :, None] if image.ndim == 2 else image
    src_h, src_w = planes.shape[:2]
    if mask.size != (src_w, src_h):
        raise InvalidArgumentError("image and mask dimensions differ")
    wt, ht = int(target_size[0]), int(target_size[1])
    if wt < 2 or ht < 2:
        raise InvalidArgumentError("target size must be at least 2x2")
    if not mask.valid.any():
        raise DegenerateInputError("image is entirely lost")

    config = model_config or ModelConfig()
    mesh = build_mesh((src_w, src_h), (wt, ht), align_corners)
    layout = build_layout((wt, ht), block_size, border)
    scatter = _MeshScatter(mask, mesh)
    if len(scatter) < min_samples:
        raise DegenerateInputError(
            f"only {len(scatter)} valid pixels in the whole image, need {min_samples}")

    grid_case = mesh.is_identity and keep_valid
    lost_plane = ~mask.valid if grid_case else None

    n_channels = planes.shape[2]
    out = np.zeros((ht, wt, n_channels), dtype=np.float64)
    info = RunInfo()

    if grid_case:
        for c in range(n_channels):
            np.copyto(out[:, :, c], planes[:, :, c], where=mask.valid)
        info.copied_pixels = int(np.count_nonzero(mask.valid))

    for block in layout.blocks:
        local_x, local_y, rows, cols = _interior_targets(block, lost_plane)
        if len(rows) == 0:
            continue
        active = block
        selection = scatter.in_support(active)
        widen_step = border if border > 0 else block_size
        while np.count_nonzero(selection) < min_samples:
            active = active.widened(widen_step)
            selection = scatter.in_support(active)
        if active is not block:
            # targets are support-local; recompute against the widened origin
            info.widened_blocks.append((block.interior, active.border))
            local_x, local_y, rows, cols = _interior_targets(active, lost_plane)
        support = active.support_size
        dictionary = build_dictionary(support)
        block_config = _block_model_config(config, support)
        ox, oy = active.support_origin
        for c in range(n_channels):
            samples = scatter.sample_set(active, planes[:, :, c], selection)
            model = generate_model(samples, block_config)
            out[rows, cols, c] = evaluate_model(model, dictionary, local_x, local_y)
        info.modelled_blocks += 1

    result = out[:, :, 0] if image.ndim == 2 else out
    if full_output:
        return result, info
    return result


def fsr_reconstruct(image: np.ndarray, mask: LossMask,
                    model_config: ModelConfig | None = None, *,
                    block_size: int = 4, border: int = 4, min_samples: int = 4,
                    keep_valid: bool = True, full_output: bool = False):
    """Reconstruct lost pixels on the source grid (identity mesh).

    Identical machinery to :func:`fsmr_resample` with the target grid equal
    to the source grid; with ``keep_valid`` (default) valid pixels are
    copied through exactly and only lost pixels are synthesised.
    """
    image = np.asarray(image, dtype=np.float64)
    h, w = image.shape[:2]
    return fsmr_resample(image, mask, (w, h), model_config,
                         block_size=block_size, border=border,
                         min_samples=min_samples, align_corners=True,
                         keep_valid=keep_valid, full_output=full_output)
