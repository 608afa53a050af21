"""Batch augmentation over a class-per-subdirectory image tree.

The output tree and manifest are a pure function of (pipeline config,
seed, input tree): sources get a global ordinal by sorted relative path,
variant ``v`` of source ``o`` uses image index ``o * multiplier + v``,
and every stage draw is keyed by that index. Worker count only changes
wall-clock time.

Stored outputs are always PNG. A trailing Normalize stage is skipped for
file output (its float result is for tensor consumers; pixels on disk
stay 8-bit), so normalization never appears in manifest stage traces.
"""

from __future__ import annotations

import csv
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import imagecore
from .pipeline import AugmentationPipeline, combinator_ordinal_table
from .stages import Normalize

logger = logging.getLogger(__name__)

IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg")
MANIFEST_COLUMNS = ("source", "output", "class", "stage_trace", "seed", "index")


@dataclass(frozen=True)
class DatasetLayout:
    """Scanned input tree: class labels and (relative path, label) sources."""

    root: Path
    classes: tuple
    sources: tuple  # of (relative posix path, class label), sorted by path


@dataclass(frozen=True)
class BatchSummary:
    """Outcome counts of one augmentation run."""

    processed: int
    skipped: int
    emitted: int
    out_dir: Path
    manifest_path: Path
    skipped_files: tuple


def scan_dataset(root) -> DatasetLayout:
    """List class subdirectories and their image files in sorted order."""
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"input directory not found: {root}")
    classes = tuple(sorted(p.name for p in root.iterdir() if p.is_dir()))
    if not classes:
        raise FileNotFoundError(f"no class subdirectories under {root}")
    sources = []
    for label in classes:
        for path in sorted((root / label).iterdir()):
            if path.is_file() and path.suffix.lower() in IMAGE_SUFFIXES:
                sources.append((f"{label}/{path.name}", label))
    sources.sort()
    return DatasetLayout(root=root, classes=classes, sources=tuple(sources))


def file_pipeline(pipeline: AugmentationPipeline) -> AugmentationPipeline:
    """The pipeline actually run for file output: trailing Normalize dropped.

    Stage positions (and with them every random substream) are unchanged,
    because Normalize may only appear last.
    """
    stages = list(pipeline.stages)
    if stages and isinstance(stages[-1], Normalize):
        stages = stages[:-1]
    return AugmentationPipeline(stages=stages, seed=pipeline.seed, name=pipeline.name)


def _run_task(pipe: AugmentationPipeline, task):
    rel_source, label, abs_source, variants = task
    try:
        img = imagecore.decode(abs_source)
    except (OSError, ValueError) as err:
        return ("skip", rel_source, str(err))
    rows = []
    for index, rel_output, abs_output, ordinals in variants:
        out, fired = pipe.apply_traced(img, index, combinator_ordinals=ordinals)
        imagecore.encode(out, abs_output)
        rows.append((rel_source, rel_output, label, "+".join(fired), pipe.seed, index))
    return ("ok", rows)


_WORKER_PIPE = None


def _worker_init(cfg):
    global _WORKER_PIPE
    _WORKER_PIPE = AugmentationPipeline.from_config(cfg)


def _worker_run(task):
    return _run_task(_WORKER_PIPE, task)


def augment_dataset(pipeline: AugmentationPipeline, in_dir, out_dir, *,
                    multiplier: int = 1, jobs: int = 1) -> BatchSummary:
    """Write ``multiplier`` augmented PNG variants per source image.

    Mirrors the class subdirectory structure under ``out_dir``, writes
    ``manifest.csv`` (one row per emitted file, sorted by index) and
    ``effective_config.json`` (the resolved pipeline config and multiplier).
    Undecodable sources are skipped with a warning; stage failures abort.
    """
    if multiplier < 1:
        raise ValueError(f"multiplier must be >= 1, got {multiplier}")
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    pipeline.validate()
    layout = scan_dataset(in_dir)
    out_root = Path(out_dir)
    out_root.mkdir(parents=True, exist_ok=True)
    for label in layout.classes:
        (out_root / label).mkdir(exist_ok=True)
    (out_root / "effective_config.json").write_text(
        json.dumps({"pipeline": pipeline.to_config(), "multiplier": multiplier},
                   indent=2) + "\n", encoding="utf-8")

    run_pipe = file_pipeline(pipeline)
    n_indices = len(layout.sources) * multiplier
    ordinal_table = combinator_ordinal_table(run_pipe, n_indices)

    tasks = []
    for ordinal, (rel_source, label) in enumerate(layout.sources):
        stem = Path(rel_source).stem
        variants = []
        for v in range(multiplier):
            index = ordinal * multiplier + v
            rel_output = f"{label}/{stem}_{index:06d}.png"
            ordinals = {pos: table[index] for pos, table in ordinal_table.items()}
            variants.append((index, rel_output, str(out_root / rel_output), ordinals))
        tasks.append((rel_source, label, str(layout.root / rel_source), variants))

    if jobs == 1:
        results = [_run_task(run_pipe, task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs, initializer=_worker_init,
                                 initargs=(run_pipe.to_config(),)) as pool:
            results = list(pool.map(_worker_run, tasks))

    rows = []
    skipped = []
    for result in results:
        if result[0] == "skip":
            _, rel_source, msg = result
            logger.warning("skipping undecodable file %s: %s", rel_source, msg)
            skipped.append(rel_source)
        else:
            rows.extend(result[1])
    rows.sort(key=lambda r: r[5])

    manifest_path = out_root / "manifest.csv"
    with manifest_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(MANIFEST_COLUMNS)
        writer.writerows(rows)

    return BatchSummary(processed=len(tasks) - len(skipped), skipped=len(skipped),
                        emitted=len(rows), out_dir=out_root,
                        manifest_path=manifest_path, skipped_files=tuple(skipped))


def preview_image(pipeline: AugmentationPipeline, in_path, out_path,
                  index: int = 0) -> tuple:
    """Augment a single file and return the tuple of fired stage kinds."""
    in_path = Path(in_path)
    if not in_path.is_file():
        raise FileNotFoundError(f"input image not found: {in_path}")
    img = imagecore.decode(in_path)
    run_pipe = file_pipeline(pipeline)
    out, fired = run_pipe.apply_traced(img, index)
    imagecore.encode(out, out_path)
    return fired
