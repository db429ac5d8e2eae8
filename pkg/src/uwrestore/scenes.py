"""Deterministic synthetic frames used by the demos and the test corpus.

No real footage ships with the package, so these generators produce the
bundled imagery: clean seabed-like scenes with multi-scale texture, frames
for blur-parameter recovery, and an underwater corpus with colored water,
veiling haze, blur, and sensor noise.  Everything is seeded; the same call
always returns the same pixels.
"""

from __future__ import annotations

import numpy as np
from scipy.ndimage import gaussian_filter

from .degrade import DegradeParams, degrade
from .image import ImageBuf

__all__ = [
    "recovery_scene",
    "seabed_scene",
    "underwater_corpus",
    "benchmark_frame",
]


def _bandpass_noise(rng: np.random.Generator, size: int, f_lo: float, f_hi: float) -> np.ndarray:
    """Unit-variance noise restricted to a normalized-frequency annulus."""
    field = rng.normal(0.0, 1.0, (size, size))
    spectrum = np.fft.fft2(field)
    fy = np.fft.fftfreq(size)[:, None]
    fx = np.fft.fftfreq(size)[None, :]
    radius = np.sqrt(fy * fy + fx * fx)
    mask = (radius >= f_lo) & (radius <= f_hi)
    shaped = np.fft.ifft2(spectrum * mask).real
    return shaped / (shaped.std() + 1e-12)


def _sprinkle(rng: np.random.Generator, img: np.ndarray, frac: float) -> None:
    """Scatter bright and dark specks (suspended particles) in place."""
    size = img.shape[1]
    count = int(frac * size * size)
    if count == 0:
        return
    ys = rng.integers(1, size - 1, count)
    xs = rng.integers(1, size - 1, count)
    amp = rng.uniform(0.2, 0.4, count)
    sign = np.where(rng.random(count) < 0.7, 1.0, -1.0)
    for c in range(3):
        img[c, ys, xs] = np.clip(img[c, ys, xs] + sign * amp, 0.02, 0.98)


def recovery_scene(seed: int, size: int = 128) -> ImageBuf:
    """Grain-dominated scene for blur-parameter recovery runs.

    Dense band-limited texture saturates the frequencies the sharpness
    indicator responds to, so the restoration fitness peaks near the blur
    that actually degraded the frame instead of at a generic band boost.
    """
    rng = np.random.default_rng(seed)
    base = gaussian_filter(rng.normal(0.0, 1.0, (size, size)), size / 10, mode="wrap")
    base = base / (np.abs(base).max() + 1e-9)
    grain = _bandpass_noise(rng, size, 0.16, 0.34)
    pebbles = _bandpass_noise(rng, size, 0.05, 0.16)
    r = 0.50 + 0.05 * base + 0.17 * grain + 0.06 * pebbles
    g = 0.49 + 0.05 * base + 0.17 * 1.04 * grain + 0.06 * pebbles
    b = 0.45 + 0.05 * base + 0.17 * 0.92 * grain + 0.05 * pebbles
    img = np.clip(np.stack([r, g, b]), 0.03, 0.97)
    _sprinkle(rng, img, 0.008)
    return ImageBuf(img)


def seabed_scene(seed: int, size: int = 512) -> ImageBuf:
    """Clean, sharp, roughly neutral seabed: ridges, gravel, and particles."""
    rng = np.random.default_rng(seed)
    ridges = gaussian_filter(rng.normal(0.0, 1.0, (size, size)), size / 12, mode="wrap")
    ridges = ridges / (np.abs(ridges).max() + 1e-9)
    rocks = _bandpass_noise(rng, size, 0.02, 0.08)
    gravel = _bandpass_noise(rng, size, 0.10, 0.30)
    r = 0.52 + 0.10 * ridges + 0.08 * rocks + 0.07 * gravel
    g = 0.50 + 0.10 * ridges + 0.08 * rocks + 0.07 * 1.03 * gravel
    b = 0.46 + 0.09 * ridges + 0.07 * rocks + 0.06 * gravel
    img = np.clip(np.stack([r, g, b]), 0.03, 0.97)
    _sprinkle(rng, img, 0.004)
    return ImageBuf(img)


# (water tint, veil strength, blur, noise) per corpus family.
_WATER_LOOKS = {
    "greenish": ((0.42, 0.80, 0.58), 0.30, 1.6, 0.008),
    "bluish": ((0.36, 0.62, 0.85), 0.30, 1.2, 0.008),
    "hazy": ((0.55, 0.78, 0.72), 0.50, 2.2, 0.010),
}


def _submerge(
    scene: ImageBuf,
    tint: tuple[float, float, float],
    veil: float,
    k: float,
    noise: float,
    seed: int,
) -> ImageBuf:
    """Apply the water column: tinted attenuation, blur, veil, noise."""
    shaded = degrade(scene, DegradeParams(k=k, attenuation=tint, noise_sigma=0.0, seed=seed))
    water = np.array(tint) * 0.9
    mixed = (1.0 - veil) * shaded.data + veil * water[:, None, None]
    rng = np.random.default_rng(seed + 1)
    mixed = mixed + rng.normal(0.0, noise, mixed.shape)
    return ImageBuf(np.clip(mixed, 0.0, 1.0))


def underwater_corpus(size: int = 256, per_family: int = 4) -> list[tuple[str, ImageBuf]]:
    """Named degraded frames spanning greenish, bluish, and hazy water."""
    frames: list[tuple[str, ImageBuf]] = []
    seed = 100
    for family, (tint, veil, k, noise) in _WATER_LOOKS.items():
        for i in range(per_family):
            scene = seabed_scene(seed, size)
            frames.append((f"{family}_{i}", _submerge(scene, tint, veil, k, noise, seed)))
            seed += 1
    return frames


def benchmark_frame(seed: int = 0, size: int = 512) -> ImageBuf:
    """One frame of the throughput sequence: a submerged seabed scene."""
    tint, veil, k, noise = _WATER_LOOKS["greenish"]
    return _submerge(seabed_scene(seed, size), tint, veil, k, noise, seed)
