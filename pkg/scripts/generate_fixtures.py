"""Generate the committed golden fixtures under tests/fixtures/.

Run from the repository root:

    python3 scripts/generate_fixtures.py

The script validates each output against an independent reference (the
naive loop oracles in tests/naive.py, or the documented stage-by-stage
composition) before writing, so a regression in the library fails here
rather than silently refreshing the goldens.
"""

import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

import naive  # noqa: E402

from geomaug import (decode, dilate, divide_sketch, encode, equalize_hist,  # noqa: E402
                     gaussian_blur, image_to_sketch, morph_open, preset,
                     tenengrad, to_grayscale)
from geomaug.batch import file_pipeline  # noqa: E402

FIXTURES = ROOT / "tests" / "fixtures"


def step_edge_8() -> np.ndarray:
    img = np.full((8, 8), 60, dtype=np.uint8)
    img[:, 4:] = 200
    return img


def synthetic_224() -> np.ndarray:
    """Deterministic 224x224 RGB scene: gradient field plus soft disks."""
    rng = np.random.default_rng(20240817)
    yy, xx = np.mgrid[0:224, 0:224].astype(np.float64)
    base = 40 + 0.35 * xx + 0.25 * yy
    img = np.stack([base, base * 0.9 + 10, base * 0.8 + 25], axis=-1)
    for _ in range(12):
        cx, cy = rng.uniform(20, 204, size=2)
        radius = rng.uniform(8, 30)
        tint = rng.uniform(-90, 90, size=3)
        dist2 = (xx - cx) ** 2 + (yy - cy) ** 2
        mask = np.exp(-dist2 / (2 * radius * radius))
        img += mask[..., None] * tint
    noise = rng.normal(0, 6, size=img.shape)
    return np.clip(img + noise, 0, 255).astype(np.uint8)


def manual_sketch(img: np.ndarray) -> np.ndarray:
    gray = to_grayscale(img).astype(np.float32)
    smoothed = gaussian_blur(gray, 21)
    divided = divide_sketch(gray, smoothed)
    equalized = equalize_hist(divided)
    opened = morph_open(equalized, 1)
    return dilate(opened, 2)


def check(name: str, ok: bool) -> None:
    if not ok:
        raise SystemExit(f"validation failed: {name}")
    print(f"  ok: {name}")


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)

    print("8x8 step edge fixtures")
    step = step_edge_8()
    step_ten = tenengrad(step)
    step_sketch = image_to_sketch(step)
    check("tenengrad(step) == naive oracle",
          np.array_equal(step_ten, naive.naive_tenengrad(step)))
    blur_fast = gaussian_blur(step.astype(np.float32), 21)
    blur_ref = naive.naive_gaussian_blur(step, 21)
    check("gaussian_blur(step) within 1e-4 of naive",
          float(np.abs(blur_fast - blur_ref).max()) < 1e-4)
    check("image_to_sketch(step) == manual composition",
          np.array_equal(step_sketch, manual_sketch(step)))
    dark = step_sketch[:, :4]
    bright = step_sketch[:, 4:]
    check("sketch: dark side of edge darker than bright side",
          float(dark.mean()) < float(bright.mean()))
    encode(step, FIXTURES / "step_edge_8.png")
    encode(step_ten, FIXTURES / "step_edge_8_tenengrad.png")
    encode(step_sketch, FIXTURES / "step_edge_8_sketch.png")

    print("224x224 synthetic fixtures")
    scene = synthetic_224()
    scene_ten = tenengrad(scene)
    scene_sketch = image_to_sketch(scene)
    check("tenengrad(scene) == naive oracle",
          np.array_equal(scene_ten, naive.naive_tenengrad(scene)))
    check("image_to_sketch(scene) == manual composition",
          np.array_equal(scene_sketch, manual_sketch(scene)))
    encode(scene, FIXTURES / "synthetic_224.png")
    encode(scene_ten, FIXTURES / "synthetic_224_tenengrad.png")
    encode(scene_sketch, FIXTURES / "synthetic_224_sketch.png")

    print("preview golden (tenengrad preset, seed 7, index 0)")
    pipe = file_pipeline(preset("tenengrad", seed=7))
    out, fired = pipe.apply_traced(scene, 0)
    print(f"  fired: {'+'.join(fired)}")
    encode(out, FIXTURES / "preview_tenengrad_s7_i0.png")

    print("round-trip checks")
    for path in sorted(FIXTURES.glob("*.png")):
        arr = decode(path)
        check(f"{path.name} decodes", arr.dtype == np.uint8)
    print("all fixtures written to", FIXTURES)


if __name__ == "__main__":
    main()
