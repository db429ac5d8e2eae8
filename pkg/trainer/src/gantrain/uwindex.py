"""Underwater-index targets for the discriminator's index branch.

Numpy reimplementation of the restoration toolkit's index metric, kept
operation-for-operation identical to that package's published pipeline
(single-precision Lab conversion, population statistics, floored
dispersions) so the two components agree on every target value.  The
conformance suite checks this module against reports emitted by the
toolkit's command line on shared frames.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

__all__ = [
    "DISPERSION_FLOOR",
    "FULL_INDEX_CHAIN",
    "TOY_INDEX_CHAIN",
    "rgb_to_lab_norm",
    "underwater_index",
    "grid_size",
    "cell_box",
    "patch_index_map",
    "patch_targets",
]

# sRGB -> XYZ (D65); white point as row sums so neutral input lands on a=b=0.
_RGB_TO_XYZ32 = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ]
).astype(np.float32)
_WHITE32 = np.array(
    [
        0.4124564 + 0.3575761 + 0.1804375,
        0.2126729 + 0.7151522 + 0.0721750,
        0.0193339 + 0.1191920 + 0.9503041,
    ]
).astype(np.float32)
_LAB_EPS = 216.0 / 24389.0
_LAB_KAPPA = 24389.0 / 27.0

DISPERSION_FLOOR = 1e-3

# (kernel, stride, padding) chains of the index branch, stem included.
FULL_INDEX_CHAIN: tuple[tuple[int, int, int], ...] = ((4, 2, 1),) * 6 + ((4, 1, 1),) * 2
TOY_INDEX_CHAIN: tuple[tuple[int, int, int], ...] = ((4, 2, 1),) * 3 + ((4, 1, 1),) * 2


def rgb_to_lab_norm(rgb: np.ndarray) -> np.ndarray:
    """Normalized Lab planes of a planar (3, H, W) RGB array.

    Plane 0 is L/100 in [0, 1]; planes 1 and 2 are a/128 and b/128 in
    [-1, 1].  Single-precision math end to end; pixels whose channels
    agree after clamping get a = b = 0 exactly.  Returns float64.
    """
    if rgb.ndim != 3 or rgb.shape[0] != 3:
        raise ValueError(f"expected a (3, H, W) array, got {rgb.shape}")
    srgb = np.empty(rgb.shape, np.float32)
    np.copyto(srgb, rgb, casting="same_kind")
    np.clip(srgb, 0.0, 1.0, out=srgb)
    neutral = np.equal(srgb[0], srgb[1]) & np.equal(srgb[1], srgb[2])

    # sRGB decoding curve, in place
    small = np.less_equal(srgb, 0.04045)
    low = srgb[small] / 12.92
    srgb += 0.055
    srgb /= 1.055
    np.power(srgb, 2.4, out=srgb)
    srgb[small] = low

    xyz = np.empty(rgb.shape, np.float32)
    np.matmul(_RGB_TO_XYZ32, srgb.reshape(3, -1), out=xyz.reshape(3, -1))
    xyz /= _WHITE32[:, None, None]

    small = np.less_equal(xyz, _LAB_EPS)
    low = (_LAB_KAPPA * xyz[small] + 16.0) / 116.0
    np.cbrt(xyz, out=xyz)
    xyz[small] = low

    out = np.empty(rgb.shape, np.float32)
    np.multiply(xyz[1], 116.0, out=out[0])
    out[0] -= 16.0
    np.subtract(xyz[0], xyz[1], out=out[1])
    out[1] *= 500.0
    np.subtract(xyz[1], xyz[2], out=out[2])
    out[2] *= 200.0
    out[1][neutral] = 0.0
    out[2][neutral] = 0.0
    out[0] /= 100.0
    out[1] /= 128.0
    out[2] /= 128.0
    np.clip(out[0], 0.0, 1.0, out=out[0])
    np.clip(out[1:], -1.0, 1.0, out=out[1:])
    return out.astype(np.float64)


def underwater_index(rgb: np.ndarray) -> float:
    """Composite water-signature score of a (3, H, W) frame.

    sqrt of the chroma-centroid offset over the product of mean lightness
    and the two floored chroma dispersions; high for casty hazy frames,
    zero for neutral ones.
    """
    lab = rgb_to_lab_norm(rgb)
    mean_a = float(lab[1].mean())
    mean_b = float(lab[2].mean())
    offset = float(np.hypot(mean_a, mean_b))
    spread_a = max(2.0 * float(lab[1].std()), DISPERSION_FLOOR)
    spread_b = max(2.0 * float(lab[2].std()), DISPERSION_FLOOR)
    lit = max(float(lab[0].mean()), DISPERSION_FLOOR)
    return float(np.sqrt(offset) / (10.0 * lit * spread_a * spread_b))


def grid_size(chain: Sequence[tuple[int, int, int]], extent: int) -> int:
    """Output cells per side after folding the conv chain over the input."""
    size = extent
    for kernel, stride, padding in chain:
        size = (size + 2 * padding - kernel) // stride + 1
        if size < 1:
            raise ValueError(f"chain consumes a {extent}-pixel input")
    return size


def cell_box(
    chain: Sequence[tuple[int, int, int]], cell: tuple[int, int], extent: int
) -> tuple[int, int, int, int]:
    """Input-pixel box (x_min, x_max, y_min, y_max) seen by one output cell.

    Folded back layer by layer (min = x*s - p, max = x*s - p + k - 1) and
    clipped to the image.
    """
    x_min = x_max = cell[0]
    y_min = y_max = cell[1]
    for kernel, stride, padding in reversed(chain):
        x_min = x_min * stride - padding
        y_min = y_min * stride - padding
        x_max = x_max * stride - padding + kernel - 1
        y_max = y_max * stride - padding + kernel - 1
    return (
        max(x_min, 0),
        min(x_max, extent - 1),
        max(y_min, 0),
        min(y_max, extent - 1),
    )


def patch_index_map(
    rgb: np.ndarray, chain: Sequence[tuple[int, int, int]]
) -> np.ndarray:
    """Underwater index per receptive-field cell of the chain.

    Square (3, N, N) input; returns a (grid, grid) array where cell
    (i, j) scores the pixels inside output cell (x=j, y=i)'s field.
    """
    if rgb.ndim != 3 or rgb.shape[0] != 3 or rgb.shape[1] != rgb.shape[2]:
        raise ValueError(f"expected a square (3, N, N) array, got {rgb.shape}")
    extent = rgb.shape[1]
    grid = grid_size(chain, extent)
    out = np.empty((grid, grid))
    for i in range(grid):
        for j in range(grid):
            x0, x1, y0, y1 = cell_box(chain, (j, i), extent)
            out[i, j] = underwater_index(rgb[:, y0 : y1 + 1, x0 : x1 + 1].copy())
    return out


def patch_targets(rgb: np.ndarray, chain: Sequence[tuple[int, int, int]]) -> np.ndarray:
    """Patch index map clamped to [0, 1], the index branch's regression target."""
    return np.clip(patch_index_map(rgb, chain), 0.0, 1.0)
