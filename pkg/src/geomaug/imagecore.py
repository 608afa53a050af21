"""Image buffers, codecs, color conversion and value-range helpers.

Images are plain numpy arrays: ``(H, W)`` uint8/float32 for grayscale,
``(H, W, 3)`` for RGB. All functions return new arrays and never mutate
their inputs, so they are safe to call from any number of workers.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np
from PIL import Image as PILImage

# ITU-R BT.601 luma weights.
GRAY_WEIGHTS = (0.299, 0.587, 0.114)

SUPPORTED_FORMATS = ("png", "jpeg")

_EXT_TO_FORMAT = {".png": "png", ".jpg": "jpeg", ".jpeg": "jpeg"}


def num_channels(img: np.ndarray) -> int:
    return 1 if img.ndim == 2 else img.shape[2]


def check_image(img, *, channels=None, dtype=None, name: str = "img") -> np.ndarray:
    """Validate an image array and return it as an ndarray.

    Parameters
    ----------
    img : array-like
        ``(H, W)`` grayscale or ``(H, W, 3)`` RGB array.
    channels : int or tuple of int, optional
        Accepted channel counts; default accepts 1 and 3.
    dtype : {"uint8", "float"}, optional
        Restrict the sample type. Float samples must be finite,
        uint8 is accepted as-is.
    """
    arr = np.asarray(img)
    if arr.ndim not in (2, 3):
        raise ValueError(f"{name} must be 2-D (gray) or 3-D (H, W, 3), got shape {arr.shape}")
    if arr.ndim == 3 and arr.shape[2] != 3:
        raise ValueError(f"{name} must have 3 channels when 3-D, got {arr.shape[2]}")
    if arr.size == 0:
        raise ValueError(f"{name} is empty")

    if arr.dtype == np.uint8:
        kind = "uint8"
    elif np.issubdtype(arr.dtype, np.floating):
        kind = "float"
        if not np.isfinite(arr).all():
            raise ValueError(f"{name} contains non-finite samples")
    else:
        raise ValueError(f"{name} must be uint8 or float, got dtype {arr.dtype}")

    if channels is not None:
        allowed = (channels,) if isinstance(channels, int) else tuple(channels)
        if num_channels(arr) not in allowed:
            raise ValueError(f"{name} must have channels in {allowed}, got {num_channels(arr)}")
    if dtype is not None and kind != dtype:
        raise ValueError(f"{name} must be {dtype}, got {kind} ({arr.dtype})")
    return arr


def to_grayscale(img: np.ndarray) -> np.ndarray:
    """Convert RGB to single-channel luminance (BT.601 weights).

    uint8 input is rounded to the nearest level; float input stays float32.
    Grayscale input is returned as a copy.
    """
    img = check_image(img)
    if num_channels(img) == 1:
        return img.copy()
    r, g, b = GRAY_WEIGHTS
    lum = r * img[..., 0].astype(np.float32) + g * img[..., 1].astype(np.float32) \
        + b * img[..., 2].astype(np.float32)
    if img.dtype == np.uint8:
        return np.rint(lum).astype(np.uint8)
    return lum.astype(np.float32)


def normalize_to_u8(img: np.ndarray) -> np.ndarray:
    """Linearly map [min, max] to [0, 255] and round to uint8.

    A constant image normalizes to all zeros: a flat field carries no
    signal, and zero avoids the division by a degenerate range.
    """
    img = check_image(img, name="img")
    data = img.astype(np.float32, copy=False)
    lo = float(data.min())
    hi = float(data.max())
    if hi == lo:
        return np.zeros(img.shape, dtype=np.uint8)
    scaled = (data - lo) * 255.0 / (hi - lo)
    return np.rint(scaled).astype(np.uint8)


def decode(path) -> np.ndarray:
    """Read a PNG or JPEG file into a uint8 array.

    Grayscale files decode to ``(H, W)``, everything else to ``(H, W, 3)``.
    Palette, RGBA, LA and CMYK inputs are converted; alpha is dropped.
    """
    path = Path(path)
    with PILImage.open(path) as im:
        if im.format not in ("PNG", "JPEG"):
            raise ValueError(f"unsupported format {im.format!r} for {path} (PNG/JPEG only)")
        if im.mode == "L":
            arr = np.asarray(im, dtype=np.uint8)
        elif im.mode == "LA":
            arr = np.asarray(im.convert("L"), dtype=np.uint8)
        elif im.mode in ("RGB", "RGBA", "P", "CMYK", "YCbCr"):
            arr = np.asarray(im.convert("RGB"), dtype=np.uint8)
        else:
            raise ValueError(f"unsupported sample type {im.mode!r} in {path}")
    return arr


def encode(img: np.ndarray, path, format: str | None = None) -> None:
    """Write a uint8 image as PNG (lossless) or JPEG.

    The format is taken from the file suffix unless given explicitly.
    """
    img = check_image(img, dtype="uint8")
    path = Path(path)
    if format is None:
        try:
            format = _EXT_TO_FORMAT[path.suffix.lower()]
        except KeyError:
            raise ValueError(f"cannot infer format from suffix {path.suffix!r}; pass format=")
    format = format.lower()
    if format not in SUPPORTED_FORMATS:
        raise ValueError(f"unsupported format {format!r}, expected one of {SUPPORTED_FORMATS}")
    mode = "L" if img.ndim == 2 else "RGB"
    os.makedirs(path.parent, exist_ok=True)
    PILImage.fromarray(img, mode=mode).save(path, format=format.upper())


def resize(img: np.ndarray, out_w: int, out_h: int) -> np.ndarray:
    """Bilinear resize to exactly ``out_w x out_h`` (aspect not preserved).

    Pixel centers sit at half-integer positions (align-corners-false), so
    resizing to the input dimensions reproduces the input bit for bit.
    """
    img = check_image(img)
    if out_w <= 0 or out_h <= 0:
        raise ValueError(f"target dimensions must be positive, got {out_w}x{out_h}")
    in_h, in_w = img.shape[:2]

    xs = (np.arange(out_w, dtype=np.float64) + 0.5) * (in_w / out_w) - 0.5
    ys = (np.arange(out_h, dtype=np.float64) + 0.5) * (in_h / out_h) - 0.5
    x0 = np.floor(xs)
    y0 = np.floor(ys)
    fx = (xs - x0).astype(np.float32)
    fy = (ys - y0).astype(np.float32)
    x0i = np.clip(x0, 0, in_w - 1).astype(np.intp)
    x1i = np.clip(x0 + 1, 0, in_w - 1).astype(np.intp)
    y0i = np.clip(y0, 0, in_h - 1).astype(np.intp)
    y1i = np.clip(y0 + 1, 0, in_h - 1).astype(np.intp)

    data = img.astype(np.float32, copy=False)
    wx = fx[None, :]
    wy = fy[:, None]
    if img.ndim == 3:
        wx = wx[..., None]
        wy = wy[..., None]
    top = (1.0 - wx) * data[y0i[:, None], x0i[None, :]] + wx * data[y0i[:, None], x1i[None, :]]
    bot = (1.0 - wx) * data[y1i[:, None], x0i[None, :]] + wx * data[y1i[:, None], x1i[None, :]]
    out = (1.0 - wy) * top + wy * bot
    if img.dtype == np.uint8:
        return np.rint(out).clip(0, 255).astype(np.uint8)
    return out.astype(np.float32)


def crop(img: np.ndarray, x0: int, y0: int, w: int, h: int) -> np.ndarray:
    """Extract the rectangle at (x0, y0) of extent (w, h); must lie inside."""
    img = check_image(img)
    in_h, in_w = img.shape[:2]
    if w <= 0 or h <= 0:
        raise ValueError(f"crop extent must be positive, got {w}x{h}")
    if x0 < 0 or y0 < 0 or x0 + w > in_w or y0 + h > in_h:
        raise ValueError(
            f"crop rect ({x0},{y0},{w},{h}) not contained in {in_w}x{in_h} image")
    return img[y0:y0 + h, x0:x0 + w].copy()


def center_crop(img: np.ndarray, out_w: int, out_h: int) -> np.ndarray:
    """Crop the centered ``out_w x out_h`` rectangle.

    Odd margins put the extra pixel on the right/bottom (floor division),
    matching row-major reading order.
    """
    img = check_image(img)
    in_h, in_w = img.shape[:2]
    if out_w > in_w or out_h > in_h:
        raise ValueError(f"crop {out_w}x{out_h} exceeds image {in_w}x{in_h}")
    x0 = (in_w - out_w) // 2
    y0 = (in_h - out_h) // 2
    return crop(img, x0, y0, out_w, out_h)
