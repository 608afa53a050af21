"""Composable augmentation pipelines with reproducible per-image randomness.

A pipeline is an ordered list of stages plus a seed and a name. Every
(image index, stage position) pair gets its own random substream derived
from the seed, so results never depend on evaluation order, batch size or
worker count: applying the pipeline to image ``i`` is a pure function of
(config, image, i).

Draw order within a substream is fixed: the gate uniform comes first,
then whatever the stage itself draws. Stages with ``p == 1`` still
consume the gate draw, which keeps downstream draws stable when a
probability is tuned.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .errors import ConfigError, StageError
from .imagecore import check_image
from .stages import (STAGE_REGISTRY, ColorJitter, HorizontalFlip, Normalize,
                     RandomRotate, RandomShift, Resize, CenterCrop, Stage,
                     Tenengrad, ImageToSketch, TenengradOrSketch)

DEFAULT_P = 0.4
COMBINED_P = 0.5
MAX_SEED = 2 ** 64 - 1


def stage_rng(seed: int, index: int, pos: int) -> np.random.Generator:
    """Dedicated generator for one (image index, stage position) pair."""
    return np.random.default_rng(np.random.SeedSequence(entropy=(seed, index, pos)))


def gate_fired(seed: int, index: int, pos: int, p: float) -> bool:
    """Whether the stage at ``pos`` fires for image ``index`` (gate draw only)."""
    return bool(stage_rng(seed, index, pos).random() < p)


def activation_ordinal(seed: int, index: int, pos: int, p: float) -> int:
    """Number of indices before ``index`` whose gate fired for this stage."""
    return sum(gate_fired(seed, j, pos, p) for j in range(index))


class AugmentationPipeline(BaseEstimator, TransformerMixin):
    """Ordered stages applied per image with seeded, index-keyed randomness.

    Parameters
    ----------
    stages : sequence of Stage
        Applied in order. At most one Normalize, and only as the last stage.
    seed : int
        Unsigned 64-bit base seed for all substreams.
    name : str
        Label recorded in configs and manifests.
    """

    def __init__(self, stages=(), seed=0, name="custom"):
        self.stages = stages
        self.seed = seed
        self.name = name

    def validate(self) -> None:
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) \
                or not 0 <= self.seed <= MAX_SEED:
            raise ConfigError(f"seed must be an unsigned 64-bit int, got {self.seed!r}")
        if not isinstance(self.name, str) or not self.name:
            raise ConfigError(f"name must be a non-empty string, got {self.name!r}")
        stages = list(self.stages)
        for pos, stage in enumerate(stages):
            if not isinstance(stage, Stage):
                raise ConfigError(f"stages[{pos}]: expected a Stage, got {type(stage).__name__}")
            try:
                stage.validate()
            except ValueError as err:
                raise ConfigError(f"stages[{pos}]: {err}") from err
            if isinstance(stage, Normalize) and pos != len(stages) - 1:
                raise ConfigError(f"stages[{pos}]: Normalize must be the last stage")

    # ------------------------------------------------------------------ apply

    def apply(self, img: np.ndarray, index: int = 0, combinator_ordinals=None) -> np.ndarray:
        """Augment one image; ``index`` selects the random substreams."""
        out, _ = self.apply_traced(img, index, combinator_ordinals)
        return out

    def apply_traced(self, img: np.ndarray, index: int = 0, combinator_ordinals=None):
        """Like :meth:`apply` but also returns the tuple of fired stage kinds.

        ``combinator_ordinals`` optionally maps stage position to a
        precomputed activation ordinal (see :func:`combinator_ordinal_table`);
        without it, ordinals are recounted from index 0.
        """
        self.validate()
        if not isinstance(index, int) or index < 0:
            raise ValueError(f"index must be a non-negative int, got {index!r}")
        arr = check_image(img, dtype="uint8")
        out = arr
        fired_kinds = []
        for pos, stage in enumerate(self.stages):
            rng = stage_rng(self.seed, index, pos)
            if not rng.random() < stage.p:
                continue
            try:
                if isinstance(stage, TenengradOrSketch) and stage.mode == "alternate":
                    if combinator_ordinals is not None and pos in combinator_ordinals:
                        ordinal = combinator_ordinals[pos]
                    else:
                        ordinal = activation_ordinal(self.seed, index, pos, stage.p)
                    out = stage.apply(out, rng, ordinal=ordinal)
                else:
                    out = stage.apply(out, rng)
            except Exception as err:
                raise StageError(f"stage '{stage.kind}' at position {pos} failed "
                                 f"for image index {index}: {err}") from err
            fired_kinds.append(stage.kind)
        if out is arr:
            out = arr.copy()
        return out, tuple(fired_kinds)

    # ------------------------------------------------------- sklearn protocol

    def fit(self, X, y=None):
        """No-op (stages are stateless); validates the configuration."""
        self.validate()
        return self

    def transform(self, X):
        """Apply to a batch; image ``i`` in ``X`` uses index ``i``."""
        return [self.apply(img, index=i) for i, img in enumerate(X)]

    # ---------------------------------------------------------------- display

    def trace(self) -> str:
        """Stage string, one token per stage: 'Resize + CenterCrop + ...'."""
        return " + ".join(stage.token() for stage in self.stages)

    def tokens(self) -> tuple:
        return tuple(stage.token() for stage in self.stages)

    # ----------------------------------------------------------------- config

    def to_config(self) -> dict:
        return {
            "name": self.name,
            "seed": self.seed,
            "stages": [
                {"kind": s.kind, "p": s.p, "params": s.params_config()}
                for s in self.stages
            ],
        }

    @classmethod
    def from_config(cls, cfg: dict) -> "AugmentationPipeline":
        if not isinstance(cfg, dict):
            raise ConfigError(f"pipeline config must be a JSON object, got {type(cfg).__name__}")
        extra = set(cfg) - {"name", "seed", "stages"}
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        missing = {"name", "seed", "stages"} - set(cfg)
        if missing:
            raise ConfigError(f"missing config keys: {sorted(missing)}")
        if not isinstance(cfg["stages"], list):
            raise ConfigError("'stages' must be a list")
        stages = []
        for i, entry in enumerate(cfg["stages"]):
            if not isinstance(entry, dict):
                raise ConfigError(f"stages[{i}]: expected an object")
            extra = set(entry) - {"kind", "p", "params"}
            if extra:
                raise ConfigError(f"stages[{i}]: unknown keys {sorted(extra)}")
            kind = entry.get("kind")
            if kind not in STAGE_REGISTRY:
                raise ConfigError(f"stages[{i}]: unknown stage kind {kind!r} "
                                  f"(valid: {sorted(STAGE_REGISTRY)})")
            params = entry.get("params", {})
            if not isinstance(params, dict):
                raise ConfigError(f"stages[{i}]: 'params' must be an object")
            params = {k: tuple(v) if isinstance(v, list) else v for k, v in params.items()}
            try:
                stage = STAGE_REGISTRY[kind](p=entry.get("p", 1.0), **params)
            except TypeError as err:
                raise ConfigError(f"stages[{i}] ({kind}): {err}") from err
            stages.append(stage)
        pipe = cls(stages=stages, seed=cfg["seed"], name=cfg["name"])
        pipe.validate()
        return pipe

    def save(self, path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_config(), indent=2) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path) -> "AugmentationPipeline":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as err:
            raise FileNotFoundError(f"cannot read pipeline config: {path}") from err
        try:
            cfg = json.loads(text)
        except json.JSONDecodeError as err:
            raise ConfigError(f"{path}: invalid JSON: {err}") from err
        return cls.from_config(cfg)


def combinator_ordinal_table(pipeline: AugmentationPipeline, n_indices: int) -> dict:
    """Precompute activation ordinals for every alternating combinator stage.

    Returns {stage position: [ordinal for index 0, 1, ..., n_indices - 1]}.
    Batch runners use this to avoid the O(index) recount in
    :meth:`AugmentationPipeline.apply_traced`.
    """
    table = {}
    for pos, stage in enumerate(pipeline.stages):
        if isinstance(stage, TenengradOrSketch) and stage.mode == "alternate":
            ordinals = []
            count = 0
            for j in range(n_indices):
                ordinals.append(count)
                if gate_fired(pipeline.seed, j, pos, stage.p):
                    count += 1
            table[pos] = ordinals
    return table


# --------------------------------------------------------------------- presets

def _jitter(p=1.0):
    return ColorJitter(brightness=0.2, contrast=0.3, saturation=0.3, hue=0.3, p=p)


def _conventional(seed, size, pre_crop_size, p):
    return AugmentationPipeline(name="conventional", seed=seed, stages=[
        Resize(size, size),
        RandomRotate(10.0),
        RandomShift(0.05, 0.05),
        _jitter(),
        Normalize(),
    ])


def _geometric(name, filter_stage, seed, size, pre_crop_size, p):
    return AugmentationPipeline(name=name, seed=seed, stages=[
        Resize(pre_crop_size, pre_crop_size),
        CenterCrop(size, size),
        HorizontalFlip(p=p),
        RandomRotate(10.0, p=p),
        filter_stage,
        RandomShift(0.05, 0.05, p=p),
        _jitter(p=p),
        Normalize(),
    ])


def _tenengrad(seed, size, pre_crop_size, p):
    return _geometric("tenengrad", Tenengrad(p=p), seed, size, pre_crop_size, p)


def _image_to_sketch(seed, size, pre_crop_size, p):
    return _geometric("image-to-sketch", ImageToSketch(p=p), seed, size, pre_crop_size, p)


def _combined(seed, size, pre_crop_size, p):
    return _geometric("tenengrad+image-to-sketch", TenengradOrSketch(p=COMBINED_P),
                      seed, size, pre_crop_size, p)


def _rotate_and_flip(seed, size, pre_crop_size, p):
    return AugmentationPipeline(name="rotate-and-flip", seed=seed, stages=[
        Resize(pre_crop_size, pre_crop_size),
        CenterCrop(size, size),
        RandomRotate(90.0),
        HorizontalFlip(),
        Normalize(),
    ])


_PRESET_BUILDERS = {
    "conventional": _conventional,
    "tenengrad": _tenengrad,
    "image-to-sketch": _image_to_sketch,
    "tenengrad+image-to-sketch": _combined,
    "rotate-and-flip": _rotate_and_flip,
}

PRESET_NAMES = tuple(_PRESET_BUILDERS)


def preset(name: str, *, seed: int = 0, size: int = 224, pre_crop_size: int = 256,
           p: float = DEFAULT_P) -> AugmentationPipeline:
    """Build one of the published pipeline presets.

    ``p`` gates the stochastic stages of the filter presets (the combined
    preset keeps its alternating filter at probability 0.5). ``size`` is the
    final output side; presets that crop first resize to ``pre_crop_size``.
    """
    if name not in _PRESET_BUILDERS:
        raise ConfigError(f"unknown preset {name!r} (valid: {list(PRESET_NAMES)})")
    pipe = _PRESET_BUILDERS[name](seed, size, pre_crop_size, p)
    pipe.validate()
    return pipe
