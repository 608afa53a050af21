"""Naive nested-loop reference implementations used as test oracles.

Everything here trades speed for obviousness: plain Python loops, no
vectorization, no shared code with the package under test beyond the
border conventions (reflect-101 for convolution/blur, replicate for
morphology).
"""

import math

import numpy as np


def reflect101(i: int, n: int) -> int:
    """Mirror an out-of-range index without repeating the edge sample."""
    if n == 1:
        return 0
    period = 2 * (n - 1)
    i = i % period
    if i < 0:
        i += period
    return i if i < n else period - i


def clamp_index(i: int, n: int) -> int:
    return 0 if i < 0 else (n - 1 if i >= n else i)


def naive_convolve3x3(img, kernel):
    """Correlation-style 3x3 pass with reflect-101 borders (float64 loops)."""
    img = np.asarray(img, dtype=np.float64)
    kernel = np.asarray(kernel, dtype=np.float64)
    h, w = img.shape
    out = np.zeros((h, w), dtype=np.float64)
    for y in range(h):
        for x in range(w):
            acc = 0.0
            for dy in (-1, 0, 1):
                for dx in (-1, 0, 1):
                    sy = reflect101(y + dy, h)
                    sx = reflect101(x + dx, w)
                    acc += kernel[dy + 1, dx + 1] * img[sy, sx]
            out[y, x] = acc
    return out


SCHARR_X = np.array([[-3, 0, 3], [-10, 0, 10], [-3, 0, 3]], dtype=np.float64)
SCHARR_Y = np.array([[-3, -10, -3], [0, 0, 0], [3, 10, 3]], dtype=np.float64)


def naive_minmax_u8(img):
    img = np.asarray(img, dtype=np.float64)
    lo, hi = img.min(), img.max()
    if hi == lo:
        return np.zeros(img.shape, dtype=np.uint8)
    out = np.zeros(img.shape, dtype=np.uint8)
    h, w = img.shape
    for y in range(h):
        for x in range(w):
            # float32 steps mirror the library's working precision
            v = (np.float32(img[y, x]) - np.float32(lo)) * np.float32(255.0) \
                / (np.float32(hi) - np.float32(lo))
            out[y, x] = int(np.rint(v))
    return out


def naive_gray(img):
    img = np.asarray(img)
    if img.ndim == 2:
        return img.copy()
    h, w = img.shape[:2]
    out = np.zeros((h, w), dtype=np.uint8)
    for y in range(h):
        for x in range(w):
            r, g, b = (np.float32(v) for v in img[y, x])
            lum = np.float32(0.299) * r + np.float32(0.587) * g + np.float32(0.114) * b
            out[y, x] = int(np.rint(lum))
    return out


def naive_tenengrad(img):
    """Gradient magnitude via loops, min-max scaled to u8."""
    gray = naive_gray(img).astype(np.float32)
    gx = naive_convolve3x3(gray, SCHARR_X)
    gy = naive_convolve3x3(gray, SCHARR_Y)
    h, w = gray.shape
    mag = np.zeros((h, w), dtype=np.float32)
    for y in range(h):
        for x in range(w):
            # hypot on float32 inputs, matching the fast path's dtype
            mag[y, x] = np.hypot(np.float32(gx[y, x]), np.float32(gy[y, x]))
    return naive_minmax_u8(mag)


def gaussian_taps(ksize: int):
    """1-D kernel: sigma from the usual ksize rule, normalized to sum 1."""
    sigma = 0.3 * ((ksize - 1) * 0.5 - 1) + 0.8
    half = (ksize - 1) // 2
    taps = [math.exp(-(i * i) / (2.0 * sigma * sigma)) for i in range(-half, half + 1)]
    total = sum(taps)
    return [t / total for t in taps]


def naive_gaussian_blur(img, ksize: int = 21):
    """Direct 2-D accumulation with the separable kernel's outer product."""
    img = np.asarray(img, dtype=np.float64)
    taps = gaussian_taps(ksize)
    half = (ksize - 1) // 2
    h, w = img.shape
    out = np.zeros((h, w), dtype=np.float64)
    for y in range(h):
        for x in range(w):
            acc = 0.0
            for dy in range(-half, half + 1):
                for dx in range(-half, half + 1):
                    sy = reflect101(y + dy, h)
                    sx = reflect101(x + dx, w)
                    acc += taps[dy + half] * taps[dx + half] * img[sy, sx]
            out[y, x] = acc
    return out


def naive_divide_sketch(gray, smoothed):
    gray = np.asarray(gray)
    smoothed = np.asarray(smoothed)
    h, w = gray.shape
    out = np.zeros((h, w), dtype=np.uint8)
    for y in range(h):
        for x in range(w):
            # float32 steps mirror the library's working precision
            denom = max(np.float32(smoothed[y, x]), np.float32(1e-6))
            v = np.float32(255.0) * np.float32(gray[y, x]) / denom
            v = min(max(v, np.float32(0.0)), np.float32(255.0))
            out[y, x] = int(np.rint(v))
    return out


def naive_equalize(img):
    img = np.asarray(img)
    n = img.size
    hist = [0] * 256
    for v in img.ravel():
        hist[int(v)] += 1
    cdf = []
    run = 0
    for c in hist:
        run += c
        cdf.append(run)
    cdf_min = next(c for c in cdf if c > 0)
    if cdf_min == n:
        return img.copy()
    lut = [int(np.rint(255.0 * (c - cdf_min) / (n - cdf_min))) for c in cdf]
    lut = [min(max(v, 0), 255) for v in lut]
    out = np.zeros_like(img)
    h, w = img.shape
    for y in range(h):
        for x in range(w):
            out[y, x] = lut[int(img[y, x])]
    return out


def _se_dims(size):
    if isinstance(size, tuple):
        return size
    return (size, size)


def naive_erode(img, size, anchor=None):
    """Window minimum, replicate borders; default anchor (k-1)//2 per axis."""
    img = np.asarray(img)
    kh, kw = _se_dims(size)
    ay, ax = anchor if anchor is not None else ((kh - 1) // 2, (kw - 1) // 2)
    h, w = img.shape
    out = np.zeros_like(img)
    for y in range(h):
        for x in range(w):
            best = 255
            for dy in range(kh):
                for dx in range(kw):
                    sy = clamp_index(y - ay + dy, h)
                    sx = clamp_index(x - ax + dx, w)
                    best = min(best, int(img[sy, sx]))
            out[y, x] = best
    return out


def naive_dilate(img, size, anchor=None):
    """Window maximum, replicate borders; default anchor (k-1)//2 per axis."""
    img = np.asarray(img)
    kh, kw = _se_dims(size)
    ay, ax = anchor if anchor is not None else ((kh - 1) // 2, (kw - 1) // 2)
    h, w = img.shape
    out = np.zeros_like(img)
    for y in range(h):
        for x in range(w):
            best = 0
            for dy in range(kh):
                for dx in range(kw):
                    sy = clamp_index(y - ay + dy, h)
                    sx = clamp_index(x - ax + dx, w)
                    best = max(best, int(img[sy, sx]))
            out[y, x] = best
    return out


def naive_open(img, size):
    """Opening as erosion followed by dilation with the mirrored anchor.

    Mirroring the anchor for the dilation step is what makes the pair an
    adjunction, so the result never exceeds the input even for even
    window sizes (a plain same-anchor composition would).
    """
    kh, kw = _se_dims(size)
    ay, ax = (kh - 1) // 2, (kw - 1) // 2
    eroded = naive_erode(img, size, anchor=(ay, ax))
    return naive_dilate(eroded, size, anchor=(kh - 1 - ay, kw - 1 - ax))


def naive_open_canonical(img, size):
    """Anchor-free opening: max, over window placements covering a pixel,
    of that window's minimum. Windows slide over the replicate-padded
    image, so no anchor convention enters the definition. Border pixels
    differ from the composed form (padding weakens erosion there); away
    from borders the two agree."""
    img = np.asarray(img)
    kh, kw = _se_dims(size)
    h, w = img.shape
    pad_y, pad_x = kh, kw
    padded = np.pad(img, ((pad_y, pad_y), (pad_x, pad_x)), mode="edge")
    out = np.zeros_like(img)
    for y in range(h):
        for x in range(w):
            py, px = y + pad_y, x + pad_x
            best = 0
            for ty in range(py - kh + 1, py + 1):
                for tx in range(px - kw + 1, px + 1):
                    lo = 255
                    for dy in range(kh):
                        for dx in range(kw):
                            lo = min(lo, int(padded[ty + dy, tx + dx]))
                    best = max(best, lo)
            out[y, x] = best
    return out


def naive_resize(img, out_w, out_h):
    """Bilinear with pixel centers at half-integers and clamped taps."""
    img = np.asarray(img)
    h, w = img.shape[:2]
    channels = 1 if img.ndim == 2 else img.shape[2]
    data = img.reshape(h, w, channels).astype(np.float64)
    out = np.zeros((out_h, out_w, channels), dtype=np.float64)
    sx, sy = w / out_w, h / out_h
    for oy in range(out_h):
        for ox in range(out_w):
            src_x = (ox + 0.5) * sx - 0.5
            src_y = (oy + 0.5) * sy - 0.5
            x0, y0 = math.floor(src_x), math.floor(src_y)
            fx, fy = src_x - x0, src_y - y0
            for ch in range(channels):
                v00 = data[clamp_index(y0, h), clamp_index(x0, w), ch]
                v01 = data[clamp_index(y0, h), clamp_index(x0 + 1, w), ch]
                v10 = data[clamp_index(y0 + 1, h), clamp_index(x0, w), ch]
                v11 = data[clamp_index(y0 + 1, h), clamp_index(x0 + 1, w), ch]
                top = v00 * (1 - fx) + v01 * fx
                bot = v10 * (1 - fx) + v11 * fx
                out[oy, ox, ch] = top * (1 - fy) + bot * fy
    if img.dtype == np.uint8:
        out = np.rint(np.float32(out)).astype(np.uint8)
    if img.ndim == 2:
        return out.reshape(out_h, out_w)
    return out


def linear_cdf_distance(img):
    """Sup distance between an image's value CDF and the flat ideal."""
    img = np.asarray(img)
    n = img.size
    hist = np.bincount(img.ravel(), minlength=256)
    cdf = np.cumsum(hist) / n
    ideal = (np.arange(256) + 1) / 256
    return float(np.abs(cdf - ideal).max())
