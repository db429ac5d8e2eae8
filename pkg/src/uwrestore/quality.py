"""No-reference quality measures for underwater frames.

The underwater index summarizes how strongly a frame shows the two
signatures of water: a chromatic cast (the a-b centroid drifts from the
achromatic origin) and haze (the a-b cloud collapses, lightness rises).
Larger values mean more degraded.  Dark-channel statistics and
receptive-field patch maps support the trainer's loss targets, and
entropy plus a Laplacian sharpness mean round out the report.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.ndimage import minimum_filter

from .image import ImageBuf, histogram, rgb_to_lab, to_gray
from .receptive import LayerSpec, map_size, rf_box

__all__ = [
    "DISPERSION_FLOOR",
    "UnderwaterReport",
    "underwater_index",
    "dark_channel",
    "background_light",
    "entropy",
    "mean_abs_laplacian",
    "patch_underwater_map",
]

# Floors keep the index finite on hazeless or black frames.
DISPERSION_FLOOR = 1e-3


@dataclass(frozen=True)
class UnderwaterReport:
    """Chromatic statistics of a frame in normalized Lab space.

    offset: distance of the (a, b) centroid from the achromatic origin.
    spread_a, spread_b: dispersion (2 std) along each chroma axis, floored.
    lightness: mean of the L plane.
    value: the composite index; high for casty, hazy, bright frames.
    """

    offset: float
    spread_a: float
    spread_b: float
    lightness: float
    value: float


def underwater_index(img: ImageBuf) -> UnderwaterReport:
    """Score the water signature of a 3-channel frame."""
    if img.channels != 3:
        raise ValueError("underwater index requires a 3-channel image")
    lab = rgb_to_lab(img)
    mean_a = float(lab[1].mean())
    mean_b = float(lab[2].mean())
    offset = float(np.hypot(mean_a, mean_b))
    spread_a = max(2.0 * float(lab[1].std()), DISPERSION_FLOOR)
    spread_b = max(2.0 * float(lab[2].std()), DISPERSION_FLOOR)
    lightness = float(lab[0].mean())
    lit = max(lightness, DISPERSION_FLOOR)
    value = float(np.sqrt(offset) / (10.0 * lit * spread_a * spread_b))
    return UnderwaterReport(
        offset=offset,
        spread_a=spread_a,
        spread_b=spread_b,
        lightness=lightness,
        value=value,
    )


def dark_channel(img: ImageBuf, patch: int = 3) -> ImageBuf:
    """Windowed minimum over channels and an odd patch x patch neighborhood.

    The window is clamped at the borders, so edge pixels minimize over
    their in-bounds neighbors only.
    """
    if img.channels != 3:
        raise ValueError("dark channel requires a 3-channel image")
    if patch < 1 or patch % 2 == 0:
        raise ValueError(f"patch side must be odd and >= 1, got {patch}")
    per_pixel = img.data.min(axis=0)
    if patch == 1:
        return ImageBuf(per_pixel[None].copy())
    out = minimum_filter(per_pixel, size=patch, mode="nearest")
    return ImageBuf(out[None])


def background_light(img: ImageBuf, patch: int = 3) -> np.ndarray:
    """Mean color of the brightest dark-channel pixels (top 0.1%, >= 1)."""
    dc = dark_channel(img, patch).data[0].ravel()
    n = dc.size
    take = max(1, n // 1000)
    # Stable order keeps tied thresholds deterministic across runs.
    idx = np.argsort(dc, kind="stable")[n - take :]
    flat = img.data.reshape(3, -1)
    return flat[:, idx].mean(axis=1)


def entropy(img: ImageBuf) -> float:
    """Shannon entropy (bits) of the 256-bin gray histogram."""
    gray = img.data[0] if img.channels == 1 else to_gray(img)
    counts = histogram(gray)
    p = counts[counts > 0] / counts.sum()
    return float(-(p * np.log2(p)).sum() + 0.0)


def mean_abs_laplacian(img: ImageBuf) -> float:
    """Mean absolute 4-neighbor Laplacian of the gray map, interior pixels."""
    gray = img.data[0] if img.channels == 1 else to_gray(img)
    h, w = gray.shape
    if h < 3 or w < 3:
        raise ValueError("laplacian mean requires an image of at least 3x3")
    core = gray[1:-1, 1:-1]
    lap = (
        gray[:-2, 1:-1] + gray[2:, 1:-1] + gray[1:-1, :-2] + gray[1:-1, 2:] - 4.0 * core
    )
    return float(np.abs(lap).mean())


def patch_underwater_map(img: ImageBuf, chain: Sequence[LayerSpec]) -> np.ndarray:
    """Underwater index per receptive-field cell of the chain.

    Returns a (grid_y, grid_x) array; cell (i, j) scores the input pixels
    inside the receptive-field box of output cell (x=j, y=i).  The image
    must be square and large enough for the chain to produce a grid.
    """
    if img.channels != 3:
        raise ValueError("patch underwater map requires a 3-channel image")
    if img.height != img.width:
        raise ValueError("patch underwater map requires a square image")
    grid = map_size(chain, img.height)[-1]
    out = np.empty((grid, grid))
    for i in range(grid):
        for j in range(grid):
            box = rf_box(chain, (j, i), img.height)
            sub = img.data[:, box.y_min : box.y_max + 1, box.x_min : box.x_max + 1]
            out[i, j] = underwater_index(ImageBuf(sub.copy())).value
    return out
