"""Edge-emphasizing filters and their building blocks.

Two composite filters are exposed: :func:`tenengrad` (Scharr gradient
magnitude, normalized to 8 bit) and :func:`image_to_sketch` (divide-by-blur
sketch with contrast equalization and morphological cleanup). The pieces
they are built from (3x3 convolution, separable Gaussian blur, histogram
equalization, grayscale morphology) are public as well.

All computation happens in float32; quantization to uint8 occurs only
where a stage requires it. Convolutions use reflect-101 borders (mirror
without repeating the edge pixel), morphology replicates the border.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .imagecore import check_image, normalize_to_u8, num_channels, to_grayscale

# Scharr derivative kernels, oriented for direct (correlation-style) use.
SCHARR_X = np.array([[-3, 0, 3],
                     [-10, 0, 10],
                     [-3, 0, 3]], dtype=np.float32)
SCHARR_Y = np.array([[-3, -10, -3],
                     [0, 0, 0],
                     [3, 10, 3]], dtype=np.float32)

DIVIDE_EPS = 1e-6


@dataclass(frozen=True)
class GradientField:
    """Per-pixel horizontal/vertical derivative responses and their magnitude."""

    gx: np.ndarray
    gy: np.ndarray
    magnitude: np.ndarray

    def __post_init__(self):
        if not (self.gx.shape == self.gy.shape == self.magnitude.shape):
            raise ValueError("gradient components must share dimensions")


def _as_float_gray(img, name="img") -> np.ndarray:
    img = check_image(img, channels=1, name=name)
    return img.astype(np.float32, copy=False)


def convolve3x3(img: np.ndarray, kernel) -> np.ndarray:
    """Correlate a grayscale image with a 3x3 kernel (kernel not flipped).

    Borders use reflect-101. Input must be at least 3x3; output is float32
    with the input's dimensions.
    """
    data = _as_float_gray(img)
    if data.shape[0] < 3 or data.shape[1] < 3:
        raise ValueError(f"image must be at least 3x3, got {data.shape[1]}x{data.shape[0]}")
    k = np.asarray(kernel, dtype=np.float32)
    if k.shape != (3, 3):
        raise ValueError(f"kernel must be 3x3, got shape {k.shape}")
    if not np.isfinite(k).all():
        raise ValueError("kernel entries must be finite")

    h, w = data.shape
    padded = np.pad(data, 1, mode="reflect")
    out = np.zeros((h, w), dtype=np.float32)
    for dy in range(3):
        for dx in range(3):
            if k[dy, dx] != 0.0:
                out += k[dy, dx] * padded[dy:dy + h, dx:dx + w]
    return out


def scharr_gradient(img: np.ndarray) -> GradientField:
    """Scharr x/y responses and the per-pixel gradient magnitude.

    RGB input is converted to grayscale first. No normalization is applied;
    magnitudes are raw ``sqrt(gx**2 + gy**2)`` float32 values.
    """
    img = check_image(img)
    if num_channels(img) == 3:
        img = to_grayscale(img)
    gx = convolve3x3(img, SCHARR_X)
    gy = convolve3x3(img, SCHARR_Y)
    return GradientField(gx=gx, gy=gy, magnitude=np.hypot(gx, gy))


def tenengrad(img: np.ndarray) -> np.ndarray:
    """Scharr gradient magnitude rescaled to the full 0..255 uint8 range.

    A flat input has no edges anywhere and comes back all zero.
    """
    return normalize_to_u8(scharr_gradient(img).magnitude)


def gaussian_kernel1d(ksize: int) -> np.ndarray:
    """Normalized 1-D Gaussian taps for an odd kernel size.

    sigma follows the usual size-to-width convention
    ``0.3 * ((ksize - 1) * 0.5 - 1) + 0.8`` (3.5 for ksize 21).
    """
    if ksize < 3 or ksize % 2 == 0:
        raise ValueError(f"kernel size must be odd and >= 3, got {ksize}")
    sigma = 0.3 * ((ksize - 1) * 0.5 - 1) + 0.8
    x = np.arange(ksize, dtype=np.float64) - (ksize - 1) / 2
    k = np.exp(-0.5 * (x / sigma) ** 2)
    return (k / k.sum()).astype(np.float32)


def gaussian_blur(img: np.ndarray, ksize: int = 21) -> np.ndarray:
    """Separable Gaussian smoothing of a grayscale image, reflect-101 borders.

    Returns float32; weights sum to one, so constant regions pass through.
    """
    data = _as_float_gray(img)
    k = gaussian_kernel1d(ksize)
    pad = ksize // 2

    padded = np.pad(data, ((0, 0), (pad, pad)), mode="reflect")
    out = sliding_window_view(padded, ksize, axis=1) @ k
    padded = np.pad(out, ((pad, pad), (0, 0)), mode="reflect")
    out = sliding_window_view(padded, ksize, axis=0) @ k
    return out.astype(np.float32)


def divide_sketch(gray: np.ndarray, smoothed: np.ndarray) -> np.ndarray:
    """Sketch effect: pixelwise ratio of an image to its smoothed version.

    The ratio is scaled by 255 so unchanged regions map to white, then
    clamped to [0, 255] and quantized. The denominator is clamped at a
    small epsilon so black smoothed regions stay finite.
    """
    g = _as_float_gray(gray, name="gray")
    s = _as_float_gray(smoothed, name="smoothed")
    if g.shape != s.shape:
        raise ValueError(f"dimension mismatch: gray {g.shape} vs smoothed {s.shape}")
    ratio = 255.0 * g / np.maximum(s, DIVIDE_EPS)
    return np.rint(np.clip(ratio, 0.0, 255.0)).astype(np.uint8)


def equalize_hist(img: np.ndarray) -> np.ndarray:
    """Classic histogram equalization of an 8-bit grayscale image.

    Levels remap through the normalized cumulative histogram:
    ``v -> round(255 * (cdf(v) - cdf_min) / (N - cdf_min))`` with cdf_min
    the smallest nonzero CDF value. Constant images pass through unchanged
    (the remap degenerates and any fixed choice would be arbitrary).
    """
    img = check_image(img, channels=1, dtype="uint8")
    hist = np.bincount(img.ravel(), minlength=256)
    cdf = hist.cumsum()
    cdf_min = int(cdf[np.nonzero(hist)[0][0]])
    n = img.size
    if cdf_min == n:
        return img.copy()
    lut = np.rint(255.0 * (cdf - cdf_min) / (n - cdf_min))
    lut = np.clip(lut, 0, 255).astype(np.uint8)
    return lut[img]


def _se_dims(size) -> tuple[int, int]:
    if isinstance(size, int):
        dims = (size, size)
    else:
        dims = tuple(int(v) for v in size)
        if len(dims) != 2:
            raise ValueError(f"structuring element must be an int or (h, w) pair, got {size!r}")
    if dims[0] < 1 or dims[1] < 1:
        raise ValueError(f"structuring element dims must be >= 1, got {dims}")
    return dims


def _window_extremum(img, dims, anchor, reduce_fn):
    # Window of extent `dims` placed so `anchor` lands on the output pixel;
    # replicate padding keeps the output the size of the input.
    kh, kw = dims
    ay, ax = anchor
    padded = np.pad(img, ((ay, kh - 1 - ay), (ax, kw - 1 - ax)), mode="edge")
    win = sliding_window_view(padded, (kh, kw))
    return reduce_fn(win, axis=(2, 3))


def erode(img: np.ndarray, size) -> np.ndarray:
    """Grayscale erosion: minimum over a rectangular all-ones window.

    Odd windows are centered; even windows anchor at their top-left so the
    result is deterministic (a 2x2 window has no center pixel).
    """
    img = check_image(img, channels=1)
    kh, kw = _se_dims(size)
    return _window_extremum(img, (kh, kw), ((kh - 1) // 2, (kw - 1) // 2), np.min)


def dilate(img: np.ndarray, size) -> np.ndarray:
    """Grayscale dilation: maximum over a rectangular all-ones window."""
    img = check_image(img, channels=1)
    kh, kw = _se_dims(size)
    return _window_extremum(img, (kh, kw), ((kh - 1) // 2, (kw - 1) // 2), np.max)


def morph_open(img: np.ndarray, size) -> np.ndarray:
    """Morphological opening: erosion followed by dilation.

    The dilation step uses the reflected window (anchor mirrored), which
    keeps opening anti-extensive (``open(img) <= img``) for even window
    sizes too; for odd windows this is the plain erode-then-dilate.
    """
    img = check_image(img, channels=1)
    kh, kw = _se_dims(size)
    ay, ax = (kh - 1) // 2, (kw - 1) // 2
    eroded = _window_extremum(img, (kh, kw), (ay, ax), np.min)
    return _window_extremum(eroded, (kh, kw), (kh - 1 - ay, kw - 1 - ax), np.max)


def image_to_sketch(img: np.ndarray, *, blur_ksize: int = 21,
                    open_size=1, dilate_size=2) -> np.ndarray:
    """Sketch-style filter: blur, divide, equalize, open, dilate.

    Takes a uint8 grayscale or RGB image and returns a uint8 grayscale
    sketch of the same dimensions. The morphology window sizes default to
    1 (open) and 2 (dilate), suited to small inputs; larger images may
    warrant larger windows.
    """
    img = check_image(img, dtype="uint8")
    gray = to_grayscale(img)
    smoothed = gaussian_blur(gray, blur_ksize)
    sketched = divide_sketch(gray, smoothed)
    equalized = equalize_hist(sketched)
    opened = morph_open(equalized, open_size)
    return dilate(opened, dilate_size)
