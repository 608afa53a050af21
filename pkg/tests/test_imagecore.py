"""Image container, codec and geometry-helper tests."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from geomaug.imagecore import (
    center_crop,
    check_image,
    crop,
    decode,
    encode,
    normalize_to_u8,
    num_channels,
    resize,
    to_grayscale,
)
from naive import naive_gray, naive_minmax_u8, naive_resize

u8_images = hnp.arrays(
    np.uint8,
    st.tuples(st.integers(1, 12), st.integers(1, 12)),
    elements=st.integers(0, 255),
)


# --------------------------------------------------------------- check_image


def test_check_image_accepts_gray_and_rgb():
    gray = np.zeros((4, 5), dtype=np.uint8)
    rgb = np.zeros((4, 5, 3), dtype=np.uint8)
    assert check_image(gray) is gray
    assert check_image(rgb) is rgb


def test_check_image_channel_restriction():
    gray = np.zeros((4, 5), dtype=np.uint8)
    rgb = np.zeros((4, 5, 3), dtype=np.uint8)
    assert check_image(gray, channels=1) is gray
    assert check_image(rgb, channels=3) is rgb
    assert check_image(rgb, channels=(1, 3)) is rgb
    with pytest.raises(ValueError, match="channels"):
        check_image(gray, channels=3)
    with pytest.raises(ValueError, match="channels"):
        check_image(rgb, channels=1)


@pytest.mark.parametrize(
    "bad",
    [
        np.zeros((4,), dtype=np.uint8),
        np.zeros((4, 5, 2), dtype=np.uint8),
        np.zeros((4, 5, 4), dtype=np.uint8),
        np.zeros((2, 3, 3, 1), dtype=np.uint8),
        np.zeros((0, 5), dtype=np.uint8),
    ],
)
def test_check_image_rejects_bad_shapes(bad):
    with pytest.raises(ValueError):
        check_image(bad)


def test_check_image_rejects_bad_dtypes():
    with pytest.raises(ValueError, match="uint8 or float"):
        check_image(np.zeros((3, 3), dtype=np.int32))
    with pytest.raises(ValueError, match="non-finite"):
        check_image(np.full((3, 3), np.nan, dtype=np.float32))
    with pytest.raises(ValueError, match="non-finite"):
        check_image(np.full((3, 3), np.inf, dtype=np.float64))


def test_check_image_dtype_restriction():
    gray_u8 = np.zeros((3, 3), dtype=np.uint8)
    gray_f = np.zeros((3, 3), dtype=np.float32)
    assert check_image(gray_u8, dtype="uint8") is gray_u8
    assert check_image(gray_f, dtype="float") is gray_f
    with pytest.raises(ValueError, match="must be float"):
        check_image(gray_u8, dtype="float")
    with pytest.raises(ValueError, match="must be uint8"):
        check_image(gray_f, dtype="uint8")


def test_num_channels():
    assert num_channels(np.zeros((2, 2), dtype=np.uint8)) == 1
    assert num_channels(np.zeros((2, 2, 3), dtype=np.uint8)) == 3


# -------------------------------------------------------------- to_grayscale


@pytest.mark.parametrize(
    "rgb, expected",
    [
        ((255, 0, 0), 76),
        ((0, 255, 0), 150),
        ((0, 0, 255), 29),
        ((255, 255, 255), 255),
        ((0, 0, 0), 0),
    ],
)
def test_to_grayscale_primaries(rgb, expected):
    img = np.full((2, 2, 3), rgb, dtype=np.uint8)
    out = to_grayscale(img)
    assert out.dtype == np.uint8
    assert out.shape == (2, 2)
    assert np.all(out == expected)


def test_to_grayscale_matches_naive(rand_u8):
    img = rand_u8((9, 7, 3))
    assert np.array_equal(to_grayscale(img), naive_gray(img))


@given(v=st.integers(0, 255))
def test_to_grayscale_neutral_pixels_keep_value(v):
    img = np.full((3, 3, 3), v, dtype=np.uint8)
    assert np.all(to_grayscale(img) == v)


def test_to_grayscale_passthrough_copies():
    gray = np.arange(12, dtype=np.uint8).reshape(3, 4)
    out = to_grayscale(gray)
    assert np.array_equal(out, gray)
    assert out is not gray


def test_to_grayscale_float_stays_float32():
    img = np.full((2, 2, 3), 10.5, dtype=np.float32)
    out = to_grayscale(img)
    assert out.dtype == np.float32
    assert np.allclose(out, 10.5, atol=1e-4)


# ------------------------------------------------------------ normalize_to_u8


def test_normalize_to_u8_three_levels():
    img = np.array([[2.0, 4.0, 6.0]], dtype=np.float32)
    assert np.array_equal(normalize_to_u8(img), [[0, 128, 255]])


def test_normalize_to_u8_binary():
    img = np.array([[0, 1], [1, 0]], dtype=np.uint8)
    assert np.array_equal(normalize_to_u8(img), [[0, 255], [255, 0]])


def test_normalize_to_u8_constant_is_zero():
    img = np.full((4, 4), 123, dtype=np.uint8)
    assert np.array_equal(normalize_to_u8(img), np.zeros((4, 4), dtype=np.uint8))


def test_normalize_to_u8_full_range_is_identity():
    img = np.arange(256, dtype=np.uint8).reshape(16, 16)
    assert np.array_equal(normalize_to_u8(img), img)


@given(u8_images)
def test_normalize_to_u8_matches_naive(img):
    assert np.array_equal(normalize_to_u8(img), naive_minmax_u8(img.astype(np.float32)))


def test_normalize_to_u8_hits_both_endpoints(rand_u8):
    img = rand_u8((8, 8)).astype(np.float32)
    out = normalize_to_u8(img)
    if img.min() != img.max():
        assert out.min() == 0
        assert out.max() == 255


# ------------------------------------------------------------------- codecs


def test_png_round_trip_gray(tmp_path, rand_u8):
    img = rand_u8((11, 7))
    path = tmp_path / "img.png"
    encode(img, path)
    assert np.array_equal(decode(path), img)


def test_png_round_trip_rgb(tmp_path, rand_u8):
    img = rand_u8((5, 9, 3))
    path = tmp_path / "img.png"
    encode(img, path)
    assert np.array_equal(decode(path), img)


def test_jpeg_round_trip_is_close(tmp_path):
    img = np.full((16, 16, 3), 128, dtype=np.uint8)
    path = tmp_path / "img.jpg"
    encode(img, path)
    out = decode(path)
    assert out.shape == img.shape
    assert np.max(np.abs(out.astype(int) - 128)) <= 4


def test_decode_rgba_and_palette(tmp_path):
    from PIL import Image

    rgba = Image.new("RGBA", (4, 4), (10, 20, 30, 255))
    rgba.save(tmp_path / "rgba.png")
    out = decode(tmp_path / "rgba.png")
    assert out.shape == (4, 4, 3)
    assert tuple(out[0, 0]) == (10, 20, 30)

    pal = Image.new("P", (4, 4))
    pal.putpalette([0] * 768)
    pal.save(tmp_path / "pal.png")
    assert decode(tmp_path / "pal.png").shape == (4, 4, 3)


def test_decode_grayscale_file_is_2d(tmp_path):
    from PIL import Image

    Image.new("L", (6, 3), 99).save(tmp_path / "gray.png")
    out = decode(tmp_path / "gray.png")
    assert out.shape == (3, 6)
    assert np.all(out == 99)


def test_decode_missing_file_raises():
    with pytest.raises(FileNotFoundError):
        decode("/nonexistent/nowhere.png")


def test_decode_unsupported_format(tmp_path):
    from PIL import Image

    Image.new("RGB", (4, 4)).save(tmp_path / "img.bmp")
    with pytest.raises(ValueError, match="format"):
        decode(tmp_path / "img.bmp")


def test_decode_garbage_bytes(tmp_path):
    bad = tmp_path / "junk.png"
    bad.write_bytes(b"not an image at all")
    with pytest.raises((ValueError, OSError)):
        decode(bad)


def test_encode_rejects_float():
    with pytest.raises(ValueError):
        encode(np.zeros((3, 3), dtype=np.float32), "/tmp/x.png")


def test_encode_rejects_unknown_suffix(tmp_path):
    with pytest.raises(ValueError):
        encode(np.zeros((3, 3), dtype=np.uint8), tmp_path / "img.tiff")


def test_encode_creates_parent_dirs(tmp_path):
    path = tmp_path / "a" / "b" / "img.png"
    encode(np.zeros((3, 3), dtype=np.uint8), path)
    assert path.exists()


# ------------------------------------------------------------------- resize


def test_resize_same_size_is_exact_copy(rand_u8):
    img = rand_u8((13, 9))
    assert np.array_equal(resize(img, 9, 13), img)


def test_resize_two_to_four():
    img = np.array([[0, 255]], dtype=np.uint8)
    assert np.array_equal(resize(img, 4, 1), [[0, 64, 191, 255]])


def test_resize_checkerboard_center():
    img = np.array([[0, 255], [255, 0]], dtype=np.uint8)
    out = resize(img, 3, 3)
    assert out[1, 1] == 128
    assert out[0, 0] == 0
    assert out[0, 2] == 255


def test_resize_constant_stays_constant():
    img = np.full((5, 7, 3), 77, dtype=np.uint8)
    out = resize(img, 11, 4)
    assert out.shape == (4, 11, 3)
    assert np.all(out == 77)


def test_resize_matches_naive_within_one_level(rand_u8):
    for shape, (w, h) in [((16, 16), (7, 9)), ((8, 12), (20, 5)), ((9, 9, 3), (14, 14))]:
        img = rand_u8(shape)
        fast = resize(img, w, h).astype(int)
        slow = naive_resize(img, w, h).astype(int)
        assert np.max(np.abs(fast - slow)) <= 1


def test_resize_validates_target():
    img = np.zeros((4, 4), dtype=np.uint8)
    with pytest.raises(ValueError):
        resize(img, 0, 4)
    with pytest.raises(ValueError):
        resize(img, 4, -1)


# ------------------------------------------------------------------- crops


def test_crop_takes_exact_window():
    img = np.arange(30, dtype=np.uint8).reshape(5, 6)
    out = crop(img, 2, 1, 3, 2)
    assert np.array_equal(out, img[1:3, 2:5])


def test_crop_rejects_out_of_bounds():
    img = np.zeros((5, 6), dtype=np.uint8)
    with pytest.raises(ValueError):
        crop(img, 4, 0, 3, 2)
    with pytest.raises(ValueError):
        crop(img, 0, 4, 2, 3)
    with pytest.raises(ValueError):
        crop(img, -1, 0, 2, 2)
    with pytest.raises(ValueError):
        crop(img, 0, 0, 0, 2)


def test_center_crop_odd_margin_floors():
    img = np.arange(25, dtype=np.uint8).reshape(5, 5)
    out = center_crop(img, 2, 2)
    assert np.array_equal(out, img[1:3, 1:3])


def test_center_crop_even():
    img = np.arange(36, dtype=np.uint8).reshape(6, 6)
    assert np.array_equal(center_crop(img, 4, 2), img[2:4, 1:5])


def test_center_crop_full_size_is_identity(rand_u8):
    img = rand_u8((6, 8, 3))
    assert np.array_equal(center_crop(img, 8, 6), img)


def test_center_crop_rejects_larger_target():
    img = np.zeros((4, 4), dtype=np.uint8)
    with pytest.raises(ValueError):
        center_crop(img, 5, 4)


@settings(max_examples=25)
@given(u8_images, st.data())
def test_center_crop_is_a_subwindow(img, data):
    h, w = img.shape
    ow = data.draw(st.integers(1, w))
    oh = data.draw(st.integers(1, h))
    out = center_crop(img, ow, oh)
    assert out.shape == (oh, ow)
    x0 = (w - ow) // 2
    y0 = (h - oh) // 2
    assert np.array_equal(out, img[y0:y0 + oh, x0:x0 + ow])
