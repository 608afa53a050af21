"""Pipeline stages: parameterized, probability-gated augmentation steps.

Each stage is a small sklearn-style estimator (``get_params``/``set_params``
work, so stages compose with the wider ecosystem and serialize cleanly).
A stage holds its parameters and an application probability ``p``; the
pipeline decides whether a stage fires and hands it a dedicated random
substream, so a stage never keeps mutable state of its own.

``apply(img, rng)`` runs the stage unconditionally; gating is the
pipeline's job. Deterministic stages ignore ``rng``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from . import filters, imagecore, transforms
from .imagecore import check_image, num_channels

# Per-channel constants commonly used for models pretrained on ImageNet.
IMAGENET_MEAN = (0.485, 0.456, 0.406)
IMAGENET_STD = (0.229, 0.224, 0.225)


def replicate_gray(img: np.ndarray) -> np.ndarray:
    """Stack a grayscale image into 3 identical channels."""
    img = check_image(img)
    if num_channels(img) == 3:
        return img.copy()
    return np.repeat(img[..., None], 3, axis=2)


def tenengrad_or_sketch(img: np.ndarray, ordinal: int, *, blur_ksize: int = 21,
                        open_size=1, dilate_size=2) -> np.ndarray:
    """Alternate between the two geometric filters by activation ordinal.

    Even ordinals apply the gradient-magnitude filter, odd ordinals the
    sketch filter, so a stream of activations yields T, S, T, S, ...
    """
    if ordinal % 2 == 0:
        return filters.tenengrad(img)
    return filters.image_to_sketch(img, blur_ksize=blur_ksize,
                                   open_size=open_size, dilate_size=dilate_size)


class Stage(BaseEstimator):
    """Base class for pipeline stages; subclasses set ``kind``."""

    kind: str = ""

    def validate(self) -> None:
        if not (isinstance(self.p, (int, float)) and 0.0 <= self.p <= 1.0):
            raise ValueError(f"{self.kind}: p must lie in [0, 1], got {self.p!r}")

    def apply(self, img: np.ndarray, rng: np.random.Generator | None = None) -> np.ndarray:
        raise NotImplementedError

    def token(self) -> str:
        """Display token for pipeline traces."""
        return self.kind

    def params_config(self) -> dict:
        cfg = self.get_params()
        cfg.pop("p")
        return cfg


class Resize(Stage):
    """Bilinear resize to a fixed width x height."""

    kind = "Resize"

    def __init__(self, width=224, height=224, p=1.0):
        self.width = width
        self.height = height
        self.p = p

    def validate(self):
        super().validate()
        if self.width < 1 or self.height < 1:
            raise ValueError(f"Resize: target dims must be >= 1, got {self.width}x{self.height}")

    def apply(self, img, rng=None):
        return imagecore.resize(img, self.width, self.height)


class CenterCrop(Stage):
    """Crop the centered width x height rectangle."""

    kind = "CenterCrop"

    def __init__(self, width=224, height=224, p=1.0):
        self.width = width
        self.height = height
        self.p = p

    def validate(self):
        super().validate()
        if self.width < 1 or self.height < 1:
            raise ValueError(f"CenterCrop: target dims must be >= 1, got {self.width}x{self.height}")

    def apply(self, img, rng=None):
        return imagecore.center_crop(img, self.width, self.height)


class HorizontalFlip(Stage):
    """Mirror the columns when the stage fires."""

    kind = "HorizontalFlip"

    def __init__(self, p=1.0):
        self.p = p

    def token(self):
        return "HorizontalFlip(p)" if self.p < 1.0 else "RandomHorizontalFlip"

    def apply(self, img, rng=None):
        return transforms.flip_horizontal(img)


class RandomRotate(Stage):
    """Rotate by an angle drawn uniformly from [-max_degrees, +max_degrees]."""

    kind = "RandomRotate"

    def __init__(self, max_degrees=10.0, p=1.0):
        self.max_degrees = max_degrees
        self.p = p

    def validate(self):
        super().validate()
        if self.max_degrees < 0:
            raise ValueError(f"RandomRotate: max_degrees must be >= 0, got {self.max_degrees}")

    def token(self):
        return f"RandomRotate({self.max_degrees:g}°)"

    def apply(self, img, rng=None):
        if self.max_degrees == 0:
            return check_image(img).copy()
        degrees = float(rng.uniform(-self.max_degrees, self.max_degrees))
        return transforms.rotate(img, degrees)


class RandomShift(Stage):
    """Translate by whole pixels, up to a fraction of each dimension.

    dx is uniform over the integers in [-round(fx*W), +round(fx*W)],
    dy likewise from fy and the height; vacated pixels become 0.
    """

    kind = "RandomShift"

    def __init__(self, fx=0.05, fy=0.05, p=1.0):
        self.fx = fx
        self.fy = fy
        self.p = p

    def validate(self):
        super().validate()
        for name, v in (("fx", self.fx), ("fy", self.fy)):
            if not 0.0 <= v < 1.0:
                raise ValueError(f"RandomShift: {name} must lie in [0, 1), got {v}")

    def token(self):
        if self.p < 1.0:
            return "RandomShift(p, percent)"
        return f"RandomShift(x={self.fx:g}, y={self.fy:g})"

    def apply(self, img, rng=None):
        img = check_image(img)
        h, w = img.shape[:2]
        mx = int(np.rint(self.fx * w))
        my = int(np.rint(self.fy * h))
        dx = int(rng.integers(-mx, mx + 1))
        dy = int(rng.integers(-my, my + 1))
        return transforms.shift(img, dx, dy)


class ColorJitter(Stage):
    """Jitter brightness, contrast, saturation and hue in a random order.

    Each multiplier is drawn uniformly around 1 (e.g. brightness 0.2 draws
    from [0.8, 1.2]); the hue shift is drawn from [-hue, +hue] turns. The
    four adjustments chain in float32 and quantize once at the end.
    """

    kind = "ColorJitter"

    def __init__(self, brightness=0.2, contrast=0.3, saturation=0.3, hue=0.3, p=1.0):
        self.brightness = brightness
        self.contrast = contrast
        self.saturation = saturation
        self.hue = hue
        self.p = p

    def validate(self):
        super().validate()
        for name, v in (("brightness", self.brightness), ("contrast", self.contrast),
                        ("saturation", self.saturation), ("hue", self.hue)):
            if v < 0:
                raise ValueError(f"ColorJitter: {name} must be >= 0, got {v}")
        if self.hue > 0.5:
            raise ValueError(f"ColorJitter: hue must be <= 0.5, got {self.hue}")

    def token(self):
        return (f"ColorJitter(brightness={self.brightness:g}, contrast={self.contrast:g}, "
                f"saturation={self.saturation:g}, hue={self.hue:g})")

    def apply(self, img, rng=None):
        img = check_image(img)
        b = float(rng.uniform(max(0.0, 1.0 - self.brightness), 1.0 + self.brightness))
        c = float(rng.uniform(max(0.0, 1.0 - self.contrast), 1.0 + self.contrast))
        s = float(rng.uniform(max(0.0, 1.0 - self.saturation), 1.0 + self.saturation))
        h = float(rng.uniform(-self.hue, self.hue))
        ops = [
            lambda x: transforms.adjust_brightness(x, b),
            lambda x: transforms.adjust_contrast(x, c),
            lambda x: transforms.adjust_saturation(x, s),
            lambda x: transforms.adjust_hue(x, h),
        ]
        out = img.astype(np.float32)
        for k in rng.permutation(4):
            out = ops[k](out)
        if img.dtype == np.uint8:
            return np.rint(np.clip(out, 0.0, 255.0)).astype(np.uint8)
        return out


class Tenengrad(Stage):
    """Gradient-magnitude filter stage (grayscale output).

    ``to_rgb`` replicates the result to 3 channels so color stages further
    down the pipeline keep working.
    """

    kind = "Tenengrad"

    def __init__(self, to_rgb=True, p=1.0):
        self.to_rgb = to_rgb
        self.p = p

    def token(self):
        return "Tenengrad(p)" if self.p < 1.0 else "Tenengrad"

    def apply(self, img, rng=None):
        out = filters.tenengrad(img)
        return replicate_gray(out) if self.to_rgb else out


class ImageToSketch(Stage):
    """Sketch filter stage (grayscale output; see :func:`filters.image_to_sketch`)."""

    kind = "ImageToSketch"

    def __init__(self, blur_ksize=21, open_size=1, dilate_size=2, to_rgb=True, p=1.0):
        self.blur_ksize = blur_ksize
        self.open_size = open_size
        self.dilate_size = dilate_size
        self.to_rgb = to_rgb
        self.p = p

    def validate(self):
        super().validate()
        if self.blur_ksize < 3 or self.blur_ksize % 2 == 0:
            raise ValueError(f"ImageToSketch: blur_ksize must be odd and >= 3, got {self.blur_ksize}")
        if self.open_size < 1 or self.dilate_size < 1:
            raise ValueError("ImageToSketch: morphology window sizes must be >= 1")

    def token(self):
        return "ImageToSketch(p)" if self.p < 1.0 else "ImageToSketch"

    def apply(self, img, rng=None):
        out = filters.image_to_sketch(img, blur_ksize=self.blur_ksize,
                                      open_size=self.open_size,
                                      dilate_size=self.dilate_size)
        return replicate_gray(out) if self.to_rgb else out


class TenengradOrSketch(Stage):
    """Combinator stage: one of the two geometric filters per activation.

    In ``alternate`` mode activations strictly alternate T, S, T, S, ...
    (the ordinal is supplied by the pipeline). ``coin`` mode instead picks
    either filter with an independent fair draw per activation.
    """

    kind = "TenengradOrSketch"

    def __init__(self, mode="alternate", blur_ksize=21, open_size=1, dilate_size=2,
                 to_rgb=True, p=1.0):
        self.mode = mode
        self.blur_ksize = blur_ksize
        self.open_size = open_size
        self.dilate_size = dilate_size
        self.to_rgb = to_rgb
        self.p = p

    def validate(self):
        super().validate()
        if self.mode not in ("alternate", "coin"):
            raise ValueError(f"TenengradOrSketch: mode must be 'alternate' or 'coin', got {self.mode!r}")
        if self.blur_ksize < 3 or self.blur_ksize % 2 == 0:
            raise ValueError(f"TenengradOrSketch: blur_ksize must be odd and >= 3, got {self.blur_ksize}")
        if self.open_size < 1 or self.dilate_size < 1:
            raise ValueError("TenengradOrSketch: morphology window sizes must be >= 1")

    def token(self):
        return "Tenengrad+ImageToSketch(p)" if self.p < 1.0 else "Tenengrad+ImageToSketch"

    def apply(self, img, rng=None, ordinal: int = 0):
        if self.mode == "coin":
            ordinal = int(rng.integers(2))
        out = tenengrad_or_sketch(img, ordinal, blur_ksize=self.blur_ksize,
                                  open_size=self.open_size, dilate_size=self.dilate_size)
        return replicate_gray(out) if self.to_rgb else out


class Normalize(Stage):
    """Scale samples to [0, 1] and standardize per channel; output is float32.

    Defaults to the ImageNet statistics. Grayscale input is replicated to
    3 channels when the parameters are per-RGB-channel.
    """

    kind = "Normalize"

    def __init__(self, mean=IMAGENET_MEAN, std=IMAGENET_STD, p=1.0):
        self.mean = mean
        self.std = std
        self.p = p

    def validate(self):
        super().validate()
        mean = np.atleast_1d(np.asarray(self.mean, dtype=np.float64))
        std = np.atleast_1d(np.asarray(self.std, dtype=np.float64))
        if mean.shape != std.shape or mean.ndim != 1 or len(mean) not in (1, 3):
            raise ValueError(f"Normalize: mean/std must both have 1 or 3 entries, "
                             f"got {len(mean)} and {len(std)}")
        if not (std > 0).all():
            raise ValueError(f"Normalize: std must be > 0 per channel, got {self.std!r}")

    def apply(self, img, rng=None):
        img = check_image(img)
        mean = np.atleast_1d(np.asarray(self.mean, dtype=np.float32))
        std = np.atleast_1d(np.asarray(self.std, dtype=np.float32))
        if len(mean) == 3 and num_channels(img) == 1:
            img = replicate_gray(img)
        if len(mean) == 3 and num_channels(img) != 3:
            raise ValueError("Normalize: 3-channel parameters require RGB input")
        data = img.astype(np.float32) / 255.0
        if img.ndim == 2:
            return ((data - mean[0]) / std[0]).astype(np.float32)
        return ((data - mean) / std).astype(np.float32)


STAGE_CLASSES = (Resize, CenterCrop, HorizontalFlip, RandomRotate, RandomShift,
                 ColorJitter, Tenengrad, ImageToSketch, TenengradOrSketch, Normalize)
STAGE_REGISTRY = {cls.kind: cls for cls in STAGE_CLASSES}
