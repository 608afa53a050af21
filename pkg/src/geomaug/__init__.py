"""Deterministic geometric image augmentation, presets and metrics."""

from .errors import ConfigError, StageError
from .imagecore import (center_crop, check_image, crop, decode, encode,
                        normalize_to_u8, num_channels, resize, to_grayscale)
from .filters import (GradientField, convolve3x3, dilate, divide_sketch,
                      equalize_hist, erode, gaussian_blur, image_to_sketch,
                      morph_open, scharr_gradient, tenengrad)
from .transforms import (adjust_brightness, adjust_contrast, adjust_hue,
                         adjust_saturation, flip_horizontal, rotate, shift)
from .stages import (CenterCrop, ColorJitter, HorizontalFlip, ImageToSketch,
                     Normalize, RandomRotate, RandomShift, Resize, Stage,
                     Tenengrad, TenengradOrSketch, replicate_gray,
                     tenengrad_or_sketch)
from .pipeline import (PRESET_NAMES, AugmentationPipeline, activation_ordinal,
                       combinator_ordinal_table, gate_fired, preset, stage_rng)
from .metrics import (BaselineRecord, MetricPoint, RunRecord, affinity,
                      aggregate, compute_metrics, diversity, plot_metrics,
                      pooled_baseline, read_runs_csv, window_mean,
                      write_metrics_csv)
from .batch import (BatchSummary, DatasetLayout, augment_dataset,
                    file_pipeline, preview_image, scan_dataset)

__version__ = "0.1.0"

__all__ = [
    "AugmentationPipeline", "BaselineRecord", "BatchSummary", "CenterCrop",
    "ColorJitter", "ConfigError", "DatasetLayout", "GradientField",
    "HorizontalFlip", "ImageToSketch", "MetricPoint", "Normalize",
    "PRESET_NAMES", "RandomRotate", "RandomShift", "Resize", "RunRecord",
    "Stage", "StageError", "Tenengrad", "TenengradOrSketch",
    "activation_ordinal", "adjust_brightness", "adjust_contrast",
    "adjust_hue", "adjust_saturation", "affinity", "aggregate",
    "augment_dataset", "center_crop", "check_image", "combinator_ordinal_table",
    "compute_metrics", "convolve3x3", "crop", "decode", "dilate",
    "divide_sketch", "diversity", "encode", "equalize_hist", "erode",
    "file_pipeline", "flip_horizontal", "gate_fired", "gaussian_blur",
    "image_to_sketch", "morph_open", "normalize_to_u8", "num_channels",
    "plot_metrics", "pooled_baseline", "preset", "preview_image",
    "read_runs_csv", "replicate_gray", "resize", "rotate", "scan_dataset",
    "scharr_gradient", "shift", "stage_rng", "tenengrad",
    "tenengrad_or_sketch", "to_grayscale", "window_mean",
    "write_metrics_csv",
]
