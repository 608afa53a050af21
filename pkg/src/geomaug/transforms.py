"""Deterministic geometric and photometric transforms.

These are the fixed-parameter primitives the stochastic pipeline stages
draw parameters for: rotation, integer translation, mirroring, and the
four color adjustments. Angles are in degrees, positive = counterclockwise
in the usual viewing orientation. Color factors follow the multiplier
convention (1.0 = unchanged); hue shifts are fractions of the full circle.
"""

from __future__ import annotations

import math

import numpy as np

from .imagecore import GRAY_WEIGHTS, check_image, num_channels


def _finish(out: np.ndarray, like: np.ndarray) -> np.ndarray:
    out = np.clip(out, 0.0, 255.0)
    if like.dtype == np.uint8:
        return np.rint(out).astype(np.uint8)
    return out.astype(np.float32)


def rotate(img: np.ndarray, degrees: float) -> np.ndarray:
    """Rotate about the image center with bilinear sampling.

    Output dimensions are unchanged; samples falling outside the source
    frame are filled with 0 (black).
    """
    img = check_image(img)
    h, w = img.shape[:2]
    theta = math.radians(degrees)
    c, s = math.cos(theta), math.sin(theta)
    # Snap residue at multiples of 90° so quarter turns permute indices
    # exactly instead of leaking epsilon past the frame bounds.
    if abs(c) < 1e-12:
        c = 0.0
    if abs(s) < 1e-12:
        s = 0.0
    cx, cy = (w - 1) / 2.0, (h - 1) / 2.0

    xo, yo = np.meshgrid(np.arange(w, dtype=np.float64) - cx,
                         np.arange(h, dtype=np.float64) - cy)
    # Inverse map: where does each output pixel sample from?
    src_x = cx + c * xo - s * yo
    src_y = cy + s * xo + c * yo

    x0 = np.floor(src_x)
    y0 = np.floor(src_y)
    fx = (src_x - x0).astype(np.float32)
    fy = (src_y - y0).astype(np.float32)
    inside = (src_x >= 0) & (src_x <= w - 1) & (src_y >= 0) & (src_y <= h - 1)

    x0i = np.clip(x0, 0, w - 1).astype(np.intp)
    x1i = np.clip(x0 + 1, 0, w - 1).astype(np.intp)
    y0i = np.clip(y0, 0, h - 1).astype(np.intp)
    y1i = np.clip(y0 + 1, 0, h - 1).astype(np.intp)

    data = img.astype(np.float32, copy=False)
    if img.ndim == 3:
        fx = fx[..., None]
        fy = fy[..., None]
        inside = inside[..., None]
    top = (1.0 - fx) * data[y0i, x0i] + fx * data[y0i, x1i]
    bot = (1.0 - fx) * data[y1i, x0i] + fx * data[y1i, x1i]
    out = np.where(inside, (1.0 - fy) * top + fy * bot, 0.0)
    return _finish(out, img)


def shift(img: np.ndarray, dx: int, dy: int) -> np.ndarray:
    """Translate by whole pixels; vacated pixels are filled with 0."""
    img = check_image(img)
    h, w = img.shape[:2]
    out = np.zeros_like(img)
    if abs(dx) >= w or abs(dy) >= h:
        return out
    src_x = slice(max(0, -dx), min(w, w - dx))
    src_y = slice(max(0, -dy), min(h, h - dy))
    dst_x = slice(max(0, dx), max(0, dx) + (src_x.stop - src_x.start))
    dst_y = slice(max(0, dy), max(0, dy) + (src_y.stop - src_y.start))
    out[dst_y, dst_x] = img[src_y, src_x]
    return out


def flip_horizontal(img: np.ndarray) -> np.ndarray:
    """Mirror the columns (left-right flip)."""
    img = check_image(img)
    return img[:, ::-1].copy()


def adjust_brightness(img: np.ndarray, factor: float) -> np.ndarray:
    """Scale all samples by ``factor`` (0 = black, 1 = unchanged)."""
    img = check_image(img)
    if factor < 0:
        raise ValueError(f"brightness factor must be >= 0, got {factor}")
    return _finish(img.astype(np.float32) * factor, img)


def _mean_gray(img: np.ndarray) -> float:
    if num_channels(img) == 1:
        return float(img.mean(dtype=np.float64))
    r, g, b = GRAY_WEIGHTS
    data = img.astype(np.float32, copy=False)
    return float(np.mean(r * data[..., 0] + g * data[..., 1] + b * data[..., 2],
                         dtype=np.float64))


def adjust_contrast(img: np.ndarray, factor: float) -> np.ndarray:
    """Scale the deviation from the image's mean gray level by ``factor``."""
    img = check_image(img)
    if factor < 0:
        raise ValueError(f"contrast factor must be >= 0, got {factor}")
    m = _mean_gray(img)
    return _finish(factor * (img.astype(np.float32) - m) + m, img)


def adjust_saturation(img: np.ndarray, factor: float) -> np.ndarray:
    """Blend each pixel with its grayscale value (0 = gray, 1 = unchanged).

    Grayscale input is returned as a copy; it has no color to saturate.
    """
    img = check_image(img)
    if factor < 0:
        raise ValueError(f"saturation factor must be >= 0, got {factor}")
    if num_channels(img) == 1:
        return img.copy()
    r, g, b = GRAY_WEIGHTS
    data = img.astype(np.float32, copy=False)
    gray = r * data[..., 0] + g * data[..., 1] + b * data[..., 2]
    out = factor * data + (1.0 - factor) * gray[..., None]
    return _finish(out, img)


def adjust_hue(img: np.ndarray, shift_frac: float) -> np.ndarray:
    """Rotate hues by ``shift_frac`` full turns (so 1.0 is a no-op).

    Grayscale input is returned as a copy.
    """
    img = check_image(img)
    if num_channels(img) == 1:
        return img.copy()
    if shift_frac == 0:
        return img.copy() if img.dtype == np.uint8 else img.astype(np.float32)
    rgb = np.clip(img.astype(np.float32) / 255.0, 0.0, 1.0)
    h, s, v = rgb_to_hsv(rgb)
    h = np.mod(h + shift_frac, 1.0)
    out = hsv_to_rgb(h, s, v) * 255.0
    return _finish(out, img)


def rgb_to_hsv(rgb: np.ndarray):
    """Vectorized RGB (floats in [0,1], last axis 3) to HSV channels."""
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    maxc = rgb.max(axis=-1)
    minc = rgb.min(axis=-1)
    v = maxc
    delta = maxc - minc
    s = np.where(maxc > 0, delta / np.where(maxc > 0, maxc, 1.0), 0.0)

    dsafe = np.where(delta > 0, delta, 1.0)
    h = np.select(
        [delta == 0, maxc == r, maxc == g],
        [0.0,
         np.mod((g - b) / dsafe, 6.0),
         (b - r) / dsafe + 2.0],
        default=(r - g) / dsafe + 4.0,
    ) / 6.0
    return h.astype(np.float32), s.astype(np.float32), v.astype(np.float32)


def hsv_to_rgb(h: np.ndarray, s: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Inverse of :func:`rgb_to_hsv`; returns floats in [0,1], last axis 3."""
    i = np.floor(h * 6.0)
    f = h * 6.0 - i
    p = v * (1.0 - s)
    q = v * (1.0 - f * s)
    t = v * (1.0 - (1.0 - f) * s)
    i = i.astype(np.int64) % 6

    r = np.choose(i, [v, q, p, p, t, v])
    g = np.choose(i, [t, v, v, q, p, p])
    b = np.choose(i, [p, p, t, v, v, q])
    return np.stack([r, g, b], axis=-1).astype(np.float32)
