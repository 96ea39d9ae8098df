"""Command line front end.

One executable, seven subcommands:

* ``corrupt``      apply a loss pattern, write corrupted image + mask
* ``reconstruct``  repair losses on the source grid (lin/cub/fsr)
* ``resize``       conventional resize of an intact image
* ``pipeline``     corrupt (or take a mask), process with one method, write the result
* ``batch``        sweep a corpus, write images + report.csv + figures
* ``metrics``      PSNR/SSIM between two image files
* ``accuracy``     compare two label files

Configuration flows from a flat ``key = value`` file (``--config``),
through repeatable ``--set key=value`` overrides, to the dedicated
``--seed/--threads/--method/--pattern`` flags, later sources winning.
Exit codes: 0 success, 2 invalid arguments, 3 degenerate input.
"""

from __future__ import annotations

import argparse
import sys

from .errors import DegenerateInputError, InvalidArgumentError
from .image_io import load_image, load_mask, save_image, save_mask
from .kernels import KernelSpec, resize
from .metrics import accuracy
from .pipeline import (METHODS, PATTERN_KINDS, PipelineConfig, batch_run,
                       config_with_overrides, corrupt, load_config_file,
                       reconstruct_stage, run, score, _format_value)

_SWEEP_PATTERNS = ("block", "line", "rand")


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="FILE", help="key = value configuration file")
    parser.add_argument("--set", action="append", metavar="KEY=VALUE", default=[],
                        help="override one configuration key (repeatable)")
    parser.add_argument("--seed", type=int, help="loss pattern seed")
    parser.add_argument("--threads", type=int, help="worker thread count")
    parser.add_argument("--method", choices=METHODS, help="processing method")
    parser.add_argument("--pattern", choices=PATTERN_KINDS, help="loss pattern kind")


def _build_config(args: argparse.Namespace) -> PipelineConfig:
    config = PipelineConfig()
    if args.config:
        config = load_config_file(args.config, config)
    overrides = {}
    for pair in args.set:
        if "=" not in pair:
            raise InvalidArgumentError(f"--set expects KEY=VALUE, got {pair!r}")
        key, value = pair.split("=", 1)
        overrides[key.strip()] = value.strip()
    config = config_with_overrides(config, overrides)
    late = {}
    if args.seed is not None:
        late["seed"] = args.seed
    if args.threads is not None:
        late["threads"] = args.threads
    if args.method is not None:
        late["method"] = args.method
    if args.pattern is not None:
        late["pattern"] = args.pattern
    return config_with_overrides(config, late)


def _image_size(image) -> tuple[int, int]:
    return (image.shape[1], image.shape[0])


def _cmd_corrupt(args, config: PipelineConfig) -> int:
    image = load_image(args.input)
    corrupted, mask = corrupt(image, config.pattern)
    save_image(corrupted, args.output)
    save_mask(mask, args.mask_out)
    return 0


def _cmd_reconstruct(args, config: PipelineConfig) -> int:
    image = load_image(args.input)
    mask = load_mask(args.mask, size=_image_size(image))
    save_image(reconstruct_stage(image, mask, config), args.output)
    return 0


def _cmd_resize(args, config: PipelineConfig) -> int:
    image = load_image(args.input)
    result = resize(image, config.target_size, KernelSpec(args.kernel),
                    align_corners=config.align_corners, antialias=config.antialias)
    save_image(result, args.output)
    return 0


def _cmd_pipeline(args, config: PipelineConfig) -> int:
    image = load_image(args.input)
    if args.mask:
        # input is already corrupted; take losses from the mask file
        mask = load_mask(args.mask, size=_image_size(image))
        corrupted = image
    else:
        corrupted, mask = corrupt(image, config.pattern)
    save_image(run(corrupted, mask, config), args.output)
    return 0


def _parse_sweep(raw: str | None, allowed: tuple[str, ...], sweep_all: tuple[str, ...],
                 flag: str) -> list[str] | None:
    if raw is None:
        return None
    if raw == "all":
        return list(sweep_all)
    items = [item.strip() for item in raw.split(",") if item.strip()]
    for item in items:
        if item not in allowed:
            raise InvalidArgumentError(f"{flag}: unknown entry {item!r}")
    if not items:
        raise InvalidArgumentError(f"{flag}: empty list")
    return items


def _cmd_batch(args, config: PipelineConfig) -> int:
    methods = _parse_sweep(args.methods, METHODS, METHODS, "--methods")
    patterns = _parse_sweep(args.patterns, PATTERN_KINDS, _SWEEP_PATTERNS, "--patterns")
    report = batch_run(args.corpus, config, args.out_dir,
                       methods=methods, patterns=patterns,
                       timing=not args.no_timing, figures=not args.no_figures)
    print(f"rows={len(report.rows)} skipped={report.skipped} "
          f"mean_psnr={_format_value(report.mean_psnr)} "
          f"mean_ssim={_format_value(report.mean_ssim)}")
    return 0


def _cmd_metrics(args, config: PipelineConfig) -> int:
    p, s = score(load_image(args.first), load_image(args.second))
    print(f"psnr={_format_value(p)}")
    print(f"ssim={_format_value(s)}")
    return 0


def _read_labels(path: str) -> list[str]:
    with open(path) as handle:
        return [line.strip() for line in handle if line.strip()]


def _cmd_accuracy(args, config: PipelineConfig) -> int:
    report = accuracy(_read_labels(args.predicted), _read_labels(args.reference))
    print(f"n_correct={report.n_correct}")
    print(f"n_false={report.n_false}")
    print(f"accuracy={_format_value(report.accuracy)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fsmr",
        description="Joint reconstruction and resizing of transmission-corrupted images.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("corrupt", help="apply a loss pattern")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("mask_out")
    _common_flags(p)
    p.set_defaults(handler=_cmd_corrupt)

    p = sub.add_parser("reconstruct", help="repair losses on the source grid")
    p.add_argument("input")
    p.add_argument("mask")
    p.add_argument("output")
    _common_flags(p)
    p.set_defaults(handler=_cmd_reconstruct)

    p = sub.add_parser("resize", help="conventional resize to the target size")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--kernel", choices=("bilinear", "bicubic"), default="bicubic")
    _common_flags(p)
    p.set_defaults(handler=_cmd_resize)

    p = sub.add_parser("pipeline", help="corrupt then process with one method")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--mask", metavar="FILE",
                   help="treat the input as corrupted and use this mask")
    _common_flags(p)
    p.set_defaults(handler=_cmd_pipeline)

    p = sub.add_parser("batch", help="sweep a corpus directory and write a CSV report")
    p.add_argument("corpus")
    p.add_argument("out_dir")
    p.add_argument("--methods", metavar="LIST",
                   help="comma-separated methods to sweep, or 'all'")
    p.add_argument("--patterns", metavar="LIST",
                   help="comma-separated patterns to sweep, or 'all'")
    p.add_argument("--no-timing", action="store_true",
                   help="write ms=0 for reproducible CSV output")
    p.add_argument("--no-figures", action="store_true",
                   help="skip the summary figure rendering")
    _common_flags(p)
    p.set_defaults(handler=_cmd_batch)

    p = sub.add_parser("metrics", help="PSNR/SSIM between two image files")
    p.add_argument("first")
    p.add_argument("second")
    _common_flags(p)
    p.set_defaults(handler=_cmd_metrics)

    p = sub.add_parser("accuracy", help="compare predicted labels against reference labels")
    p.add_argument("predicted")
    p.add_argument("reference")
    _common_flags(p)
    p.set_defaults(handler=_cmd_accuracy)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _build_config(args)
        return args.handler(args, config)
    except InvalidArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DegenerateInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
