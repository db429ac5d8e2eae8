"""No-reference quality score used to rank candidate restorations.

Three indicators are combined: sharpness (mean squared directional
gradient of the luma map), contrast (mean per-channel standard deviation),
and color spread (mean pairwise distance between channel means, which a
color cast inflates).  The composite rewards sharp, contrasty images whose
channels are balanced:

    value = (w_s * sharpness) * (w_c * contrast) / (1 + w_b * color_spread)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.fft as sfft

from .image import ImageBuf, resize, to_gray
from .restore import normalize_channels, _radial_term

__all__ = [
    "FitnessWeights",
    "FitnessScore",
    "haze_indicator",
    "balance_indicator",
    "contrast_indicator",
    "fitness_score",
    "restoration_fitness",
]

# Central-difference directions at 0, 45, 90, 135 degrees (row, col offsets).
_DIRECTIONS = ((0, 1), (-1, 1), (-1, 0), (-1, -1))

SEARCH_THUMB_SIDE = 128


@dataclass(frozen=True)
class FitnessWeights:
    """Indicator weights; all default to 1."""

    sharpness: float = 1.0
    contrast: float = 1.0
    color_spread: float = 1.0


@dataclass(frozen=True)
class FitnessScore:
    sharpness: float
    color_spread: float
    contrast: float
    value: float


def haze_indicator(img: ImageBuf) -> float:
    """Mean squared central difference of the luma map over four directions.

    The difference at pixel p along offset d is (g[p+d] - g[p-d]) / 2;
    border pixels are excluded.  Hazy (blurred) images score low, clear
    images high.
    """
    gray = img.data[0] if img.channels == 1 else to_gray(img)
    h, w = gray.shape
    if h < 3 or w < 3:
        raise ValueError("haze indicator requires an image of at least 3x3")
    core = gray[1 : h - 1, 1 : w - 1]
    total = 0.0
    for dy, dx in _DIRECTIONS:
        fwd = gray[1 + dy : h - 1 + dy, 1 + dx : w - 1 + dx]
        bwd = gray[1 - dy : h - 1 - dy, 1 - dx : w - 1 - dx]
        g = (fwd - bwd) / 2.0
        total += float(np.mean(g * g))
    del core
    return total / len(_DIRECTIONS)


def balance_indicator(img: ImageBuf) -> float:
    """Mean absolute pairwise distance between channel means."""
    if img.channels != 3:
        raise ValueError("balance indicator requires a 3-channel image")
    mr, mg, mb = img.data.reshape(3, -1).mean(axis=1)
    return (abs(mr - mg) + abs(mr - mb) + abs(mg - mb)) / 3.0


def contrast_indicator(img: ImageBuf) -> float:
    """Mean per-channel population standard deviation of pixel values."""
    flat = img.data.reshape(img.channels, -1)
    return float(flat.std(axis=1).mean())


def fitness_score(img: ImageBuf, weights: FitnessWeights = FitnessWeights()) -> FitnessScore:
    """Evaluate all indicators and their weighted composite (3-channel input)."""
    psi = haze_indicator(img)
    mu = balance_indicator(img)
    sigma = contrast_indicator(img)
    value = (weights.sharpness * psi) * (weights.contrast * sigma) / (
        1.0 + weights.color_spread * mu
    )
    return FitnessScore(sharpness=psi, color_spread=mu, contrast=sigma, value=value)


def restoration_fitness(
    img: ImageBuf,
    bounds: "ParamBounds",
    weights: FitnessWeights = FitnessWeights(),
    thumb_side: int = SEARCH_THUMB_SIDE,
) -> Callable[[np.ndarray], float]:
    """Build the search objective for one frame.

    The frame is downscaled so its longest side is at most thumb_side, its
    channel spectra are cached, and the returned callable maps a normalized
    (x, y) position in [0, 1]^2 to the composite score of deconvolving plus
    normalizing the thumbnail with the decoded parameters.  The decoded k
    is applied to the thumbnail as-is, so the searched value is the one the
    full-resolution restoration uses.
    """
    from .swarm import ParamBounds  # noqa: F401  (type only; avoids cycle at import time)

    long_side = max(img.height, img.width)
    if long_side > thumb_side:
        scale = thumb_side / long_side
        th = max(3, round(img.height * scale))
        tw = max(3, round(img.width * scale))
        thumb = resize(img, th, tw)
    else:
        thumb = img.copy()

    h, w = thumb.height, thumb.width
    specs = [sfft.rfft2(thumb.data[c]) for c in range(thumb.channels)]
    radial = _radial_term(np.fft.fftfreq(h), np.fft.rfftfreq(w))

    def objective(position: np.ndarray) -> float:
        k, noise_ratio = bounds.decode(position[0], position[1])
        otf = np.exp(-k * radial)
        gain = otf / (otf * otf + noise_ratio)
        planes = np.empty((thumb.channels, h, w))
        for c in range(thumb.channels):
            planes[c] = sfft.irfft2(gain * specs[c], s=(h, w))
        return fitness_score(normalize_channels(planes), weights).value

    return objective
