"""Frequency-selective mesh-to-grid resampling.

Reconstructs images with transmission losses and resizes them to a target
grid, either sequentially (repair, then a conventional resize) or jointly
in one sparse-modelling step, where the surviving pixels are treated as
scattered mesh points in the target plane.
"""

from .errors import (DegenerateInputError, FsmrError, InvalidArgumentError,
                     NoSelectableAtomError)
from .geometry import (MeshMap, RunInfo, affine_mesh, build_layout, build_mesh,
                       fsmr_resample, fsr_reconstruct, scatter_valid_pixels)
from .image_io import load_image, load_mask, save_image, save_mask, to_float, to_uint8
from .kernels import KernelSpec, interp_reconstruct, resize
from .metrics import AccuracyReport, accuracy, luma, psnr, ssim
from .model import (BasisDictionary, ModelConfig, SampleSet, SparseModel,
                    SpatialWindow, SpectralWeight, build_dictionary,
                    evaluate_model, generate_model, select_basis)
from .patterns import (LossMask, make_block_mask, make_line_mask, make_rand_mask,
                       splitmix64, splitmix64_unit)
from .pipeline import (METHODS, PATTERN_KINDS, PatternSpec, PipelineConfig,
                       QualityReport, batch_run, config_with_overrides, corrupt,
                       load_config_file, reference_target, run, run_joint,
                       run_sequential, score)

__version__ = "0.1.0"

__all__ = [
    "METHODS", "PATTERN_KINDS",
    "AccuracyReport", "BasisDictionary", "DegenerateInputError", "FsmrError",
    "InvalidArgumentError", "KernelSpec", "LossMask", "MeshMap", "ModelConfig",
    "NoSelectableAtomError", "PatternSpec", "PipelineConfig", "QualityReport",
    "RunInfo", "SampleSet", "SparseModel", "SpatialWindow", "SpectralWeight",
    "accuracy", "affine_mesh", "batch_run", "build_dictionary", "build_layout",
    "build_mesh", "config_with_overrides", "corrupt", "evaluate_model",
    "fsmr_resample", "fsr_reconstruct", "generate_model", "interp_reconstruct",
    "load_config_file", "load_image", "load_mask", "luma", "make_block_mask",
    "make_line_mask", "make_rand_mask", "psnr", "reference_target", "resize",
    "run", "run_joint", "run_sequential", "save_image", "save_mask",
    "scatter_valid_pixels", "score", "select_basis", "splitmix64",
    "splitmix64_unit", "ssim", "to_float", "to_uint8", "__version__",
]
