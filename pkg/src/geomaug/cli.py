"""Command-line interface: augment, preview, metrics, presets.

Exit codes: 0 success, 1 I/O or processing error, 2 config error (also
used by argparse for usage errors). Set GEOMAUG_LOG=DEBUG|INFO|... to
control log verbosity.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from .batch import augment_dataset, preview_image
from .errors import ConfigError, StageError
from .metrics import (DEFAULT_WINDOW, compute_metrics, plot_metrics,
                      read_runs_csv, write_metrics_csv)
from .pipeline import PRESET_NAMES, AugmentationPipeline, preset


def _setup_logging() -> None:
    name = os.environ.get("GEOMAUG_LOG", "WARNING").upper()
    level = getattr(logging, name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _add_pipeline_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--preset", choices=PRESET_NAMES,
                       help="built-in pipeline preset")
    group.add_argument("--config", metavar="FILE",
                       help="pipeline config JSON file")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the pipeline seed")


def _build_pipeline(args) -> AugmentationPipeline:
    if args.config is not None:
        pipe = AugmentationPipeline.load(args.config)
    else:
        pipe = preset(args.preset)
    if args.seed is not None:
        pipe.set_params(seed=args.seed)
    pipe.validate()
    return pipe


def _cmd_augment(args) -> int:
    pipe = _build_pipeline(args)
    summary = augment_dataset(pipe, args.in_dir, args.out_dir,
                              multiplier=args.multiplier, jobs=args.jobs)
    print(f"processed {summary.processed} source image(s), "
          f"skipped {summary.skipped}, wrote {summary.emitted} file(s)")
    print(f"manifest: {summary.manifest_path}")
    return 0


def _cmd_preview(args) -> int:
    pipe = _build_pipeline(args)
    fired = preview_image(pipe, args.in_path, args.out_path, index=args.index)
    print(f"applied: {'+'.join(fired) if fired else '(no stage fired)'}")
    print(f"wrote {args.out_path}")
    return 0


def _cmd_metrics(args) -> int:
    records = read_runs_csv(args.logs)
    points = compute_metrics(records, baseline_name=args.baseline, window=args.window)
    write_metrics_csv(points, args.out_path)
    if args.plot:
        plot_metrics(points, args.plot)
    print(f"wrote {len(points)} augmentation row(s) to {args.out_path}")
    return 0


def _cmd_presets(args) -> int:
    for name in PRESET_NAMES:
        print(f"{name}: {preset(name).trace()}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geomaug",
        description="Deterministic geometric image augmentation and metrics.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_aug = sub.add_parser("augment", help="augment a class-per-subdirectory image tree")
    _add_pipeline_args(p_aug)
    p_aug.add_argument("--in", dest="in_dir", required=True, metavar="DIR",
                       help="input dataset root (one subdirectory per class)")
    p_aug.add_argument("--out", dest="out_dir", required=True, metavar="DIR",
                       help="output root for augmented PNGs and manifest.csv")
    p_aug.add_argument("--multiplier", type=int, default=1, metavar="K",
                       help="augmented variants per source image (default 1)")
    p_aug.add_argument("--jobs", type=int, default=1, metavar="N",
                       help="worker processes (default 1; results are identical)")
    p_aug.set_defaults(func=_cmd_augment)

    p_prev = sub.add_parser("preview", help="augment a single image and print the stage trace")
    _add_pipeline_args(p_prev)
    p_prev.add_argument("--in", dest="in_path", required=True, metavar="FILE")
    p_prev.add_argument("--out", dest="out_path", required=True, metavar="FILE")
    p_prev.add_argument("--index", type=int, default=0,
                        help="image index selecting the random substreams (default 0)")
    p_prev.set_defaults(func=_cmd_preview)

    p_met = sub.add_parser("metrics", help="compute affinity/diversity from run logs")
    p_met.add_argument("--logs", required=True, metavar="CSV",
                       help="run log (augmentation,replicate,epoch,train_loss,acc_val,acc_field)")
    p_met.add_argument("--baseline", default="none", metavar="NAME",
                       help="augmentation name of the unaugmented baseline (default 'none')")
    p_met.add_argument("--out", dest="out_path", required=True, metavar="CSV",
                       help="output metrics table")
    p_met.add_argument("--window", type=int, default=DEFAULT_WINDOW,
                       help=f"final-epoch window for mean loss (default {DEFAULT_WINDOW})")
    p_met.add_argument("--plot", metavar="SVG", default=None,
                       help="optional affinity/diversity scatter plot")
    p_met.set_defaults(func=_cmd_metrics)

    p_list = sub.add_parser("presets", help="list presets with their stage strings")
    p_list.set_defaults(func=_cmd_presets)

    return parser


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    except (FileNotFoundError, StageError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
