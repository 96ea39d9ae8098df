"""Processing pipelines and the batch evaluation harness.

A run takes a clean image, corrupts it with a loss pattern, repairs and
resizes it with one of four methods, and scores the result against the
clean original resized to the same target:

* ``lin``  — axial linear gap filling, then bilinear resize (sequential)
* ``cub``  — axial cubic gap filling, then bicubic resize (sequential)
* ``fsr``  — sparse-model reconstruction on the source grid, then a
  conventional resize (bicubic unless configured; sequential)
* ``fsmr`` — sparse-model reconstruction and resize in one joint step

All configuration lives in one flat key space so a config file, command
line overrides, and library calls can share it.  Metrics are computed on
8-bit quantised pixels (luma for colour), matching what lands in files.
"""

from __future__ import annotations

import csv
import dataclasses
import logging
import time
import typing
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import InvalidArgumentError
from .geometry import fsmr_resample, fsr_reconstruct
from .image_io import load_image, save_image, to_float, to_uint8
from .kernels import KernelSpec, interp_reconstruct, resize
from .metrics import luma, psnr, ssim
from .model import ModelConfig
from .patterns import LossMask, make_block_mask, make_line_mask, make_rand_mask

logger = logging.getLogger(__name__)

METHODS = ("lin", "cub", "fsr", "fsmr")
PATTERN_KINDS = ("block", "line", "rand", "none")

CSV_HEADER = ("filename", "pattern", "method", "psnr", "ssim", "ms")

_IMAGE_SUFFIXES = (".png", ".pgm", ".ppm")


@dataclass(frozen=True)
class PatternSpec:
    """Loss pattern to apply: kind plus its parameters and the seed."""

    kind: str = "block"
    seed: int = 0
    block_loss: int = 16
    block_stride: int = 32
    block_offset: int = 8
    line_height: int = 4
    line_stride: int = 16
    line_offset: int = 0
    rand_p: float = 0.25

    def __post_init__(self) -> None:
        if self.kind not in PATTERN_KINDS:
            raise InvalidArgumentError(
                f"pattern kind must be one of {PATTERN_KINDS}, got {self.kind!r}")

    def make_mask(self, size: tuple[int, int]) -> LossMask:
        w, h = size
        if self.kind == "block":
            return make_block_mask(size, self.block_loss, self.block_stride, self.block_offset)
        if self.kind == "line":
            return make_line_mask(size, self.line_height, self.line_stride, self.line_offset)
        if self.kind == "rand":
            return make_rand_mask(size, self.rand_p, self.seed)
        return LossMask(np.ones((h, w), dtype=bool))


@dataclass(frozen=True)
class PipelineConfig:
    """Everything a run needs: method, target geometry, model parameters,
    kernel choice, threading, and the loss pattern.

    ``resize_kernel`` names the second-stage kernel after ``fsr`` and
    defaults to bicubic (``auto``); the joint ``fsmr`` path has no second
    stage and rejects an explicit kernel.  ``lin`` and ``cub`` resize with
    their own kernels.  ``antialias`` stretches conventional resize kernels
    on downscale, matching how ML-framework image loaders resize; it
    applies to the sequential second stage and the metric reference alike.
    """

    method: str = "fsmr"
    target_width: int = 224
    target_height: int = 224
    block_size: int = 4
    border: int = 4
    iterations: int = 100
    window_decay: float = 0.8
    spectral_decay: float = 0.8
    compensation: float = 0.5
    energy_floor: float = 1e-16
    min_samples: int = 4
    resize_kernel: str = "auto"
    align_corners: bool = True
    antialias: bool = True
    keep_valid: bool = True
    threads: int = 1
    pattern: PatternSpec = field(default_factory=PatternSpec)

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise InvalidArgumentError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.resize_kernel not in ("auto", "bilinear", "bicubic"):
            raise InvalidArgumentError(f"unknown resize kernel {self.resize_kernel!r}")
        if self.method == "fsmr" and self.resize_kernel != "auto":
            raise InvalidArgumentError(
                "the joint fsmr path resamples in one step and takes no resize kernel")
        if self.target_width < 2 or self.target_height < 2:
            raise InvalidArgumentError("target size must be at least 2x2")
        if self.threads < 1:
            raise InvalidArgumentError("thread count must be positive")
        if self.block_size < 1 or self.border < 0 or self.min_samples < 1:
            raise InvalidArgumentError("invalid block geometry")
        self.model_config()  # validates the model parameter group

    @property
    def target_size(self) -> tuple[int, int]:
        return (self.target_width, self.target_height)

    def model_config(self) -> ModelConfig:
        return ModelConfig(
            iterations=self.iterations,
            window_decay=self.window_decay,
            spectral_decay=self.spectral_decay,
            compensation=self.compensation,
            energy_floor=self.energy_floor,
        )

    def second_stage_kernel(self) -> KernelSpec:
        if self.method == "lin":
            return KernelSpec("bilinear")
        if self.method == "cub":
            return KernelSpec("bicubic")
        name = "bicubic" if self.resize_kernel == "auto" else self.resize_kernel
        return KernelSpec(name)


_PATTERN_FIELDS = {f.name for f in dataclasses.fields(PatternSpec)}
_CONFIG_FIELDS = {f.name for f in dataclasses.fields(PipelineConfig)} - {"pattern"}
_FIELD_TYPES = {
    **typing.get_type_hints(PatternSpec),
    **{k: v for k, v in typing.get_type_hints(PipelineConfig).items() if k != "pattern"},
}
_TRUE_WORDS = ("1", "true", "yes", "on")
_FALSE_WORDS = ("0", "false", "no", "off")


def _coerce(key: str, raw) -> object:
    want = _FIELD_TYPES[key]
    try:
        if want is bool:
            if isinstance(raw, str):
                word = raw.strip().lower()
                if word in _TRUE_WORDS:
                    return True
                if word in _FALSE_WORDS:
                    return False
                raise ValueError(f"not a boolean: {raw!r}")
            return bool(raw)
        if want is int:
            if isinstance(raw, bool) or (isinstance(raw, float) and not raw.is_integer()):
                raise ValueError(f"not an integer: {raw!r}")
            return int(raw)
        if want is float:
            return float(raw)
        return str(raw)
    except (TypeError, ValueError) as exc:
        raise InvalidArgumentError(f"bad value for {key!r}: {exc}") from exc


def config_with_overrides(base: PipelineConfig, overrides: typing.Mapping[str, object]) -> PipelineConfig:
    """New config with the given flat key-value overrides applied.

    Keys are PipelineConfig or PatternSpec field names; ``pattern`` selects
    the pattern kind.  String values are parsed to the field's type.
    Unknown keys are rejected.
    """
    cfg_changes: dict[str, object] = {}
    pat_changes: dict[str, object] = {}
    for key, raw in overrides.items():
        if key == "pattern":
            pat_changes["kind"] = str(raw)
        elif key in _PATTERN_FIELDS:
            pat_changes[key] = _coerce(key, raw)
        elif key in _CONFIG_FIELDS:
            cfg_changes[key] = _coerce(key, raw)
        else:
            raise InvalidArgumentError(f"unknown config key {key!r}")
    pattern = replace(base.pattern, **pat_changes) if pat_changes else base.pattern
    return replace(base, pattern=pattern, **cfg_changes)


def load_config_file(path: str | Path, base: PipelineConfig | None = None) -> PipelineConfig:
    """Read a flat ``key = value`` config file (``#`` comments, blank lines
    allowed) on top of ``base``."""
    overrides: dict[str, object] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise InvalidArgumentError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, value = text.split("=", 1)
        overrides[key.strip()] = value.strip()
    return config_with_overrides(base or PipelineConfig(), overrides)


def corrupt(image: np.ndarray, spec: PatternSpec) -> tuple[np.ndarray, LossMask]:
    """Apply a loss pattern: lost pixels are zeroed, and the mask records
    which pixels survived."""
    image = np.asarray(image, dtype=np.float64)
    if image.ndim not in (2, 3):
        raise InvalidArgumentError("image must be 2-D or 3-D (H, W[, C])")
    h, w = image.shape[:2]
    mask = spec.make_mask((w, h))
    valid = mask.valid if image.ndim == 2 else mask.valid[:, :, None]
    return np.where(valid, image, 0.0), mask


def reconstruct_stage(image: np.ndarray, mask: LossMask, config: PipelineConfig) -> np.ndarray:
    """Source-grid reconstruction only (no resize); sequential methods."""
    if config.method == "lin":
        return interp_reconstruct(image, mask, KernelSpec("bilinear"))
    if config.method == "cub":
        return interp_reconstruct(image, mask, KernelSpec("bicubic"))
    if config.method == "fsr":
        return fsr_reconstruct(image, mask, config.model_config(),
                               block_size=config.block_size, border=config.border,
                               min_samples=config.min_samples,
                               keep_valid=config.keep_valid)
    raise InvalidArgumentError("the joint fsmr method has no separate reconstruction stage")


def run_sequential(image: np.ndarray, mask: LossMask, config: PipelineConfig) -> np.ndarray:
    """Reconstruct on the source grid, then resize to the target."""
    if config.method not in ("lin", "cub", "fsr"):
        raise InvalidArgumentError(f"sequential run needs method lin/cub/fsr, got {config.method!r}")
    repaired = reconstruct_stage(image, mask, config)
    return resize(repaired, config.target_size, config.second_stage_kernel(),
                  align_corners=config.align_corners, antialias=config.antialias)


def run_joint(image: np.ndarray, mask: LossMask, config: PipelineConfig) -> np.ndarray:
    """Reconstruct and resize in a single mesh-to-grid step."""
    if config.method != "fsmr":
        raise InvalidArgumentError(f"joint run needs method fsmr, got {config.method!r}")
    return fsmr_resample(image, mask, config.target_size, config.model_config(),
                         block_size=config.block_size, border=config.border,
                         min_samples=config.min_samples,
                         align_corners=config.align_corners,
                         keep_valid=config.keep_valid)


def run(image: np.ndarray, mask: LossMask, config: PipelineConfig) -> np.ndarray:
    """Dispatch to the sequential or joint path per ``config.method``."""
    if config.method == "fsmr":
        return run_joint(image, mask, config)
    return run_sequential(image, mask, config)


def reference_target(image: np.ndarray, config: PipelineConfig) -> np.ndarray:
    """Shared ground truth for scoring: the clean original resized to the
    target with the bicubic kernel."""
    return resize(np.asarray(image, dtype=np.float64), config.target_size,
                  KernelSpec("bicubic"), align_corners=config.align_corners,
                  antialias=config.antialias)


def _quantised_luma(image: np.ndarray) -> np.ndarray:
    plane = to_float(to_uint8(image))
    return luma(plane) if plane.ndim == 3 else plane


def score(result: np.ndarray, reference: np.ndarray) -> tuple[float, float]:
    """PSNR and SSIM between two images, computed on the 8-bit quantised
    luma so scores describe exactly what file output would contain."""
    a = _quantised_luma(result)
    b = _quantised_luma(reference)
    return psnr(a, b), ssim(a, b)


@dataclass(frozen=True)
class BatchRow:
    filename: str
    pattern: str
    method: str
    psnr: float
    ssim: float
    ms: int


@dataclass(frozen=True)
class QualityReport:
    """Batch outcome: one row per image/pattern/method plus skip count."""

    rows: tuple[BatchRow, ...]
    skipped: int = 0

    @property
    def mean_psnr(self) -> float:
        return float(np.mean([r.psnr for r in self.rows])) if self.rows else float("nan")

    @property
    def mean_ssim(self) -> float:
        return float(np.mean([r.ssim for r in self.rows])) if self.rows else float("nan")


def _format_value(value) -> str:
    if isinstance(value, float):
        if np.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(float(value))
    return str(value)


def write_csv(rows: typing.Iterable[BatchRow], path: str | Path) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow([row.filename, row.pattern, row.method,
                             _format_value(row.psnr), _format_value(row.ssim),
                             _format_value(row.ms)])


def _corpus_files(corpus_dir: Path) -> list[Path]:
    files = sorted(p for p in corpus_dir.iterdir()
                   if p.is_file() and p.suffix.lower() in _IMAGE_SUFFIXES)
    if not files:
        raise InvalidArgumentError(f"no images ({'/'.join(_IMAGE_SUFFIXES)}) in {corpus_dir}")
    return files


def _run_one(path: Path, config: PipelineConfig, out_dir: Path,
             timing: bool) -> BatchRow:
    image = load_image(path)
    corrupted, mask = corrupt(image, config.pattern)
    start = time.perf_counter()
    result = run(corrupted, mask, config)
    elapsed_ms = int(round((time.perf_counter() - start) * 1000)) if timing else 0
    p, s = score(result, reference_target(image, config))
    out_name = f"{path.stem}__{config.pattern.kind}__{config.method}.png"
    save_image(result, out_dir / out_name)
    return BatchRow(path.name, config.pattern.kind, config.method, p, s, elapsed_ms)


def batch_run(corpus_dir: str | Path, config: PipelineConfig, out_dir: str | Path, *,
              methods: typing.Sequence[str] | None = None,
              patterns: typing.Sequence[str] | None = None,
              timing: bool = True, figures: bool = True) -> QualityReport:
    """Process every image in ``corpus_dir`` under each pattern/method
    combination, writing result images, ``report.csv``, and summary figures
    into ``out_dir``.

    ``methods`` and ``patterns`` default to the single method and pattern
    kind in ``config``; passing lists sweeps their cross product.  Rows are
    ordered by filename, then pattern, then method, independent of thread
    scheduling.  Unreadable images are skipped with a warning and counted.
    """
    corpus_dir = Path(corpus_dir)
    out_dir = Path(out_dir)
    if not corpus_dir.is_dir():
        raise InvalidArgumentError(f"corpus directory {corpus_dir} does not exist")
    out_dir.mkdir(parents=True, exist_ok=True)
    files = _corpus_files(corpus_dir)
    method_list = list(methods) if methods else [config.method]
    pattern_list = list(patterns) if patterns else [config.pattern.kind]

    tasks: list[tuple[Path, PipelineConfig]] = []
    for path in files:
        for pattern_kind in pattern_list:
            for method in method_list:
                task_config = config_with_overrides(
                    config, {"method": method, "pattern": pattern_kind})
                tasks.append((path, task_config))

    results: list[BatchRow | None] = [None] * len(tasks)

    def worker(index: int) -> None:
        path, task_config = tasks[index]
        try:
            results[index] = _run_one(path, task_config, out_dir, timing)
        except (OSError, InvalidArgumentError) as exc:
            logger.warning("skipping %s: %s", path.name, exc)

    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            list(pool.map(worker, range(len(tasks))))
    else:
        for index in range(len(tasks)):
            worker(index)

    rows = tuple(r for r in results if r is not None)
    report = QualityReport(rows, skipped=len(tasks) - len(rows))
    write_csv(rows, out_dir / "report.csv")
    if figures:
        from .report import render_report_figures
        render_report_figures(report, out_dir)
    return report
