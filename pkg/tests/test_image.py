"""Image container, gray/Lab conversions, histograms, stats, and file I/O."""

import numpy as np
import pytest

from uwrestore import (
    ImageBuf,
    channel_stats,
    histogram,
    lab_to_rgb,
    load_image,
    rgb_to_lab,
    save_image,
    to_gray,
)

from conftest import constant_image, random_image


# ---------------------------------------------------------------------------
# scalar reference oracles


def _reference_lab(r: float, g: float, b: float) -> tuple[float, float, float]:
    """Scalar CIE 1976 Lab under D65, the long way, in float64.

    Independent of the library path: per-value gamma expansion, explicit
    matrix rows, cube-root curve with the standard eps/kappa constants.
    Returns normalized (L/100, a/128, b/128).
    """

    def lin(c):
        return c / 12.92 if c <= 0.04045 else ((c + 0.055) / 1.055) ** 2.4

    rl, gl, bl = lin(r), lin(g), lin(b)
    rows = [
        (0.4124564, 0.3575761, 0.1804375),
        (0.2126729, 0.7151522, 0.0721750),
        (0.0193339, 0.1191920, 0.9503041),
    ]
    xyz = [m[0] * rl + m[1] * gl + m[2] * bl for m in rows]
    white = [sum(m) for m in rows]
    eps = 216.0 / 24389.0
    kappa = 24389.0 / 27.0

    def f(t):
        return t ** (1.0 / 3.0) if t > eps else (kappa * t + 16.0) / 116.0

    fx, fy, fz = (f(v / w) for v, w in zip(xyz, white))
    lab_l = 116.0 * fy - 16.0
    lab_a = 500.0 * (fx - fy)
    lab_b = 200.0 * (fy - fz)
    return lab_l / 100.0, lab_a / 128.0, lab_b / 128.0


# ---------------------------------------------------------------------------
# ImageBuf


def test_imagebuf_shape_validation():
    with pytest.raises(ValueError):
        ImageBuf(np.zeros((4, 4)))
    with pytest.raises(ValueError):
        ImageBuf(np.zeros((2, 4, 4)))
    with pytest.raises(ValueError):
        ImageBuf(np.zeros((3, 0, 4)))


def test_imagebuf_hwc_round_trip():
    rng = np.random.default_rng(3)
    hwc = rng.random((5, 7, 3))
    img = ImageBuf.from_hwc(hwc)
    assert img.channels == 3 and img.height == 5 and img.width == 7
    assert np.array_equal(img.to_hwc(), hwc)
    gray = ImageBuf.from_hwc(hwc[:, :, 0])
    assert gray.channels == 1
    assert np.array_equal(gray.to_hwc(), hwc[:, :, 0])


# ---------------------------------------------------------------------------
# to_gray


def test_to_gray_white_is_one():
    out = to_gray(constant_image(1.0))
    assert np.allclose(out, 1.0, atol=1e-12)


def test_to_gray_pure_red():
    img = ImageBuf(np.stack([np.ones((6, 6)), np.zeros((6, 6)), np.zeros((6, 6))]))
    assert np.allclose(to_gray(img), 0.299, atol=1e-12)


def test_to_gray_matches_scalar_loop():
    img = random_image(11, height=4, width=4)
    out = to_gray(img)
    for y in range(4):
        for x in range(4):
            r, g, b = (img.data[c, y, x] for c in range(3))
            expected = 0.299 * r + 0.587 * g + 0.114 * b
            assert out[y, x] == pytest.approx(expected, abs=1e-12)


def test_to_gray_rejects_single_channel():
    with pytest.raises(ValueError):
        to_gray(constant_image(0.5, channels=1))


# ---------------------------------------------------------------------------
# Lab conversion


def test_lab_neutral_gray_is_achromatic():
    lab = rgb_to_lab(constant_image(0.5))
    assert np.all(lab[1] == 0.0)
    assert np.all(lab[2] == 0.0)


def test_lab_black():
    lab = rgb_to_lab(constant_image(0.0))
    assert np.allclose(lab[0], 0.0, atol=1e-6)
    assert np.all(lab[1] == 0.0)
    assert np.all(lab[2] == 0.0)


def test_lab_saturated_blue_has_negative_b():
    img = ImageBuf(np.stack([np.zeros((4, 4)), np.zeros((4, 4)), np.ones((4, 4))]))
    lab = rgb_to_lab(img)
    assert np.all(lab[2] < -0.3)


def test_lab_matches_scalar_reference():
    img = random_image(17, height=5, width=5)
    lab = rgb_to_lab(img)
    for y in range(5):
        for x in range(5):
            want = _reference_lab(*(img.data[c, y, x] for c in range(3)))
            got = (lab[0, y, x], lab[1, y, x], lab[2, y, x])
            # library converts in float32 internally
            assert got == pytest.approx(want, abs=2e-5)


@pytest.mark.parametrize("level", [0.0, 0.1, 0.25, 0.5, 0.73, 1.0])
def test_lab_achromatic_invariance(level):
    lab = rgb_to_lab(constant_image(level))
    assert float(np.abs(lab[1]).max()) < 0.01
    assert float(np.abs(lab[2]).max()) < 0.01


def test_lab_round_trip_in_gamut():
    for seed in range(5):
        img = random_image(seed, height=12, width=12)
        back = lab_to_rgb(rgb_to_lab(img))
        assert float(np.abs(back.data - img.data).max()) < 1e-3


def test_lab_output_ranges():
    img = random_image(23, height=10, width=10)
    lab = rgb_to_lab(img)
    assert lab[0].min() >= 0.0 and lab[0].max() <= 1.0
    assert lab[1:].min() >= -1.0 and lab[1:].max() <= 1.0


def test_lab_rejects_single_channel():
    with pytest.raises(ValueError):
        rgb_to_lab(constant_image(0.2, channels=1))


def test_lab_deterministic():
    img = random_image(29)
    assert np.array_equal(rgb_to_lab(img), rgb_to_lab(img))


# ---------------------------------------------------------------------------
# histogram


def test_histogram_constant_half():
    img = constant_image(0.5, channels=1, height=6, width=7)
    counts = histogram(img.data[0])
    assert counts[128] == 42
    assert counts.sum() == 42
    assert np.count_nonzero(counts) == 1


def test_histogram_two_value_split():
    plane = np.zeros((4, 8))
    plane[:, 4:] = 1.0
    counts = histogram(plane)
    assert counts[0] == 16 and counts[255] == 16
    assert counts.sum() == 32


def test_histogram_matches_counting_loop():
    rng = np.random.default_rng(5)
    plane = rng.random((9, 9))
    counts = histogram(plane)
    brute = [0] * 256
    for v in plane.ravel():
        idx = int(np.floor(v * 255.0 + 0.5))
        brute[min(max(idx, 0), 255)] += 1
    assert counts.tolist() == brute


@pytest.mark.parametrize("seed", range(6))
def test_histogram_sum_equals_pixel_count(seed):
    rng = np.random.default_rng(seed)
    shape = (rng.integers(1, 20), rng.integers(1, 20))
    plane = rng.random(shape)
    assert histogram(plane).sum() == plane.size


def test_histogram_empty_rejected():
    with pytest.raises(ValueError):
        histogram(np.empty((0,)))


# ---------------------------------------------------------------------------
# channel stats


def test_channel_stats_constant():
    means, stds = channel_stats(constant_image(0.3))
    assert np.allclose(means, 0.3, atol=1e-15)
    assert np.all(stds == 0.0)


def test_channel_stats_bernoulli_half():
    data = np.zeros((3, 4, 8))
    data[:, :, 4:] = 1.0
    means, stds = channel_stats(ImageBuf(data))
    assert np.allclose(means, 0.5, atol=1e-15)
    assert np.allclose(stds, 0.5, atol=1e-15)


def test_channel_stats_matches_two_pass_loop():
    img = random_image(31, height=7, width=5)
    means, stds = channel_stats(img)
    for c in range(3):
        vals = img.data[c].ravel()
        m = sum(vals) / vals.size
        var = sum((v - m) ** 2 for v in vals) / vals.size
        assert means[c] == pytest.approx(m, abs=1e-9)
        assert stds[c] == pytest.approx(var**0.5, abs=1e-9)


# ---------------------------------------------------------------------------
# file I/O


@pytest.mark.parametrize("ext", ["png", "bmp"])
def test_save_load_lossless_formats(tmp_path, ext):
    img = random_image(37, height=9, width=11)
    path = tmp_path / f"frame.{ext}"
    save_image(img, path)
    back = load_image(path)
    # 8-bit storage: each value lands on its round-half-up level
    levels = np.floor(img.data * 255.0 + 0.5) / 255.0
    assert back.channels == 3
    assert np.allclose(back.data, levels, atol=1e-12)


def test_save_load_grayscale(tmp_path):
    img = random_image(41, channels=1, height=6, width=6)
    path = tmp_path / "gray.png"
    save_image(img, path)
    back = load_image(path)
    assert back.channels == 1
    levels = np.floor(img.data * 255.0 + 0.5) / 255.0
    assert np.allclose(back.data, levels, atol=1e-12)


def test_save_load_jpeg(tmp_path):
    img = random_image(43, height=16, width=16)
    path = tmp_path / "frame.jpg"
    save_image(img, path)
    back = load_image(path)
    assert back.channels == 3
    assert back.height == 16 and back.width == 16
    assert float(np.abs(back.data - img.data).mean()) < 0.2
