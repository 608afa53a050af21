"""Affinity and diversity metrics computed from training-run logs.

Affinity is out-of-distribution accuracy over in-distribution validation
accuracy (1.0 means the augmentation introduced no measurable shift).
Diversity is the augmented model's mean training loss over the final
epochs divided by the unaugmented baseline's; values above 1 mean the
augmentation made the training data harder to fit.

Run logs arrive as long-format CSV with columns
``augmentation,replicate,epoch,train_loss,acc_val,acc_field`` where the
accuracy cells only need to be filled on each run's final epoch.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError

DEFAULT_WINDOW = 5

RUNS_COLUMNS = ("augmentation", "replicate", "epoch", "train_loss", "acc_val", "acc_field")
METRICS_COLUMNS = ("augmentation", "affinity", "affinity_std", "diversity", "diversity_std", "n")


def _check_losses(losses, owner: str) -> tuple:
    out = tuple(float(x) for x in losses)
    if not out:
        raise ValueError(f"{owner}: train_losses must be non-empty")
    if not all(math.isfinite(x) and x > 0 for x in out):
        raise ValueError(f"{owner}: train_losses must all be finite and > 0")
    return out


@dataclass(frozen=True)
class RunRecord:
    """One training run: an epoch loss series plus final accuracies."""

    augmentation: str
    replicate: int
    train_losses: tuple
    acc_val: float
    acc_field: float

    def __post_init__(self):
        if not self.augmentation:
            raise ValueError("RunRecord: augmentation name must be non-empty")
        object.__setattr__(self, "train_losses",
                           _check_losses(self.train_losses, "RunRecord"))
        for name, v in (("acc_val", self.acc_val), ("acc_field", self.acc_field)):
            if not (math.isfinite(v) and 0.0 <= v <= 1.0):
                raise ValueError(f"RunRecord: {name} must lie in [0, 1], got {v}")


@dataclass(frozen=True)
class BaselineRecord:
    """Loss series of the unaugmented reference run."""

    train_losses: tuple

    def __post_init__(self):
        object.__setattr__(self, "train_losses",
                           _check_losses(self.train_losses, "BaselineRecord"))


@dataclass(frozen=True)
class MetricPoint:
    """Aggregated metrics for one augmentation across replicates."""

    augmentation: str
    affinity: float
    affinity_std: float
    diversity: float
    diversity_std: float
    n: int


def window_mean(losses, window: int = DEFAULT_WINDOW) -> float:
    """Mean of the last ``window`` entries (the whole series if shorter)."""
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    tail = tuple(losses)[-window:]
    if not tail:
        raise ValueError("loss series must be non-empty")
    return sum(tail) / len(tail)


def affinity(record: RunRecord) -> float:
    """Field accuracy over validation accuracy; exactly 1.0 when equal."""
    if record.acc_val == 0:
        raise ValueError(f"affinity undefined for {record.augmentation!r}: acc_val is 0")
    return record.acc_field / record.acc_val


def diversity(record: RunRecord, baseline: BaselineRecord,
              window: int = DEFAULT_WINDOW) -> float:
    """Final-window mean loss of ``record`` relative to the baseline's."""
    base = window_mean(baseline.train_losses, window)
    if base <= 0:
        raise ValueError(f"baseline mean loss must be > 0, got {base}")
    return window_mean(record.train_losses, window) / base


def pooled_baseline(records) -> BaselineRecord:
    """Pool baseline replicates into one series via the per-epoch mean."""
    records = list(records)
    if not records:
        raise ConfigError("no baseline records to pool")
    lengths = {len(r.train_losses) for r in records}
    if len(lengths) > 1:
        raise ConfigError(f"baseline replicates disagree on epoch count: {sorted(lengths)}")
    series = tuple(sum(col) / len(col) for col in zip(*(r.train_losses for r in records)))
    return BaselineRecord(train_losses=series)


def _sample_std(values) -> float:
    if len(values) < 2:
        return 0.0
    mean = sum(values) / len(values)
    return math.sqrt(sum((v - mean) ** 2 for v in values) / (len(values) - 1))


def aggregate(records, baseline: BaselineRecord,
              window: int = DEFAULT_WINDOW) -> list:
    """Group records by augmentation name; mean and sample std per metric.

    Output is sorted by name; the result does not depend on input order.
    """
    groups = {}
    for rec in records:
        groups.setdefault(rec.augmentation, []).append(rec)
    points = []
    for name in sorted(groups):
        affs = [affinity(r) for r in groups[name]]
        divs = [diversity(r, baseline, window) for r in groups[name]]
        points.append(MetricPoint(
            augmentation=name,
            affinity=sum(affs) / len(affs),
            affinity_std=_sample_std(affs),
            diversity=sum(divs) / len(divs),
            diversity_std=_sample_std(divs),
            n=len(affs),
        ))
    return points


def compute_metrics(records, baseline_name: str = "none",
                    window: int = DEFAULT_WINDOW) -> list:
    """Aggregate every augmentation (baseline included) against the baseline.

    The baseline rows, pooled per epoch, provide the diversity denominator;
    they also appear in the output, where their diversity is 1 by definition.
    """
    base_records = [r for r in records if r.augmentation == baseline_name]
    if not base_records:
        raise ConfigError(f"no rows found for baseline augmentation {baseline_name!r}")
    return aggregate(records, pooled_baseline(base_records), window)


# ------------------------------------------------------------------------ CSV

def read_runs_csv(path) -> list:
    """Parse a long-format run log into RunRecords (sorted for determinism)."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in RUNS_COLUMNS if c not in header]
        if missing:
            raise ConfigError(f"{path}: missing column(s) {missing} in CSV header")
        groups = {}
        for lineno, row in enumerate(reader, start=2):
            try:
                key = (row["augmentation"], int(row["replicate"]))
                epoch = int(row["epoch"])
                loss = float(row["train_loss"])
            except (TypeError, ValueError) as err:
                raise ConfigError(f"{path}:{lineno}: bad row: {err}") from err
            epochs = groups.setdefault(key, {})
            if epoch in epochs:
                raise ConfigError(f"{path}:{lineno}: duplicate epoch {epoch} "
                                  f"for {key[0]!r} replicate {key[1]}")
            epochs[epoch] = (loss, row.get("acc_val") or "", row.get("acc_field") or "")
    records = []
    for (name, replicate), epochs in groups.items():
        ordered = [epochs[e] for e in sorted(epochs)]
        losses = [loss for loss, _, _ in ordered]
        _, acc_val, acc_field = ordered[-1]
        if not acc_val or not acc_field:
            raise ConfigError(f"{path}: final epoch of {name!r} replicate {replicate} "
                              f"must carry acc_val and acc_field")
        try:
            records.append(RunRecord(augmentation=name, replicate=replicate,
                                     train_losses=losses,
                                     acc_val=float(acc_val), acc_field=float(acc_field)))
        except ValueError as err:
            raise ConfigError(f"{path}: {err}") from err
    records.sort(key=lambda r: (r.augmentation, r.replicate))
    return records


def write_metrics_csv(points, path) -> None:
    """Write aggregated points as CSV; floats use shortest round-trip form."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(METRICS_COLUMNS)
        for pt in points:
            writer.writerow([pt.augmentation,
                             repr(float(pt.affinity)), repr(float(pt.affinity_std)),
                             repr(float(pt.diversity)), repr(float(pt.diversity_std)),
                             pt.n])


def plot_metrics(points, path) -> None:
    """Scatter affinity (x) against diversity (y) with std error bars."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 5))
    for pt in points:
        ax.errorbar(pt.affinity, pt.diversity,
                    xerr=pt.affinity_std or None, yerr=pt.diversity_std or None,
                    marker="o", capsize=3)
        ax.annotate(pt.augmentation, (pt.affinity, pt.diversity),
                    textcoords="offset points", xytext=(6, 6), fontsize=8)
    ax.set_xlabel("affinity")
    ax.set_ylabel("diversity")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path)
    plt.close(fig)
