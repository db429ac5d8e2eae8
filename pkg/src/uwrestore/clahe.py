"""Contrast-limited adaptive histogram equalization on the lightness plane.

The filtering stage compresses local contrast; this stage restores it
without touching the color balance.  The image is converted to Lab, the L
plane is equalized tile by tile with a clipped 256-bin histogram, and the
a and b planes pass through untouched before conversion back to RGB.

Clipped mass is redistributed by water filling: the uniform increment is
solved in closed form so the redistributed histogram keeps the tile's
pixel count without the usual iterate-until-stable loop.  Mapping uses the
midpoint CDF (cdf[v] - h[v]/2) / N, which sends a flat histogram's value v
back to itself and keeps constant images fixed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .image import ImageBuf, _lab_inverse32, _lab_planes32, _scratch, rgb_to_lab

__all__ = ["ClaheConfig", "clahe", "clahe_lab", "equalize_plane"]

_BINS = 256


@dataclass(frozen=True)
class ClaheConfig:
    """Tile grid and clip limit for the equalization stage.

    clip_limit is a multiple of the uniform bin height: a tile histogram
    is clipped at clip_limit * tile_pixels / 256 before mapping.
    """

    tiles_x: int = 8
    tiles_y: int = 8
    clip_limit: float = 2.0
    enabled: bool = True

    def __post_init__(self) -> None:
        if self.tiles_x < 1 or self.tiles_y < 1:
            raise ValueError(f"tile counts must be >= 1, got {self.tiles_x}x{self.tiles_y}")
        if not self.clip_limit > 1.0:
            raise ValueError(f"clip_limit must be > 1, got {self.clip_limit}")


def _redistribute(hists: np.ndarray, beta: np.ndarray) -> np.ndarray:
    """Clip each histogram at beta and spread the excess uniformly.

    Each bin ends at min(h + t, beta), and conserving the tile's pixel
    count pins the increment: sum(min(t, beta - h)) = 0.  Sorting the
    per-bin headroom beta - h makes that piecewise-linear in t, so t has a
    closed form and bin mass is conserved exactly.
    """
    needs = (hists > beta[:, None]).any(axis=1)
    out = hists.astype(float)  # astype always copies
    if not needs.any():
        return out
    h = out[needs]
    b = beta[needs]
    gaps = np.sort(b[:, None] - h, axis=1)
    prefix = np.zeros((gaps.shape[0], _BINS + 1))
    np.cumsum(gaps, axis=1, out=prefix[:, 1:])
    # Residual of the conservation condition evaluated at each knot.
    resid = prefix[:, 1:] + (_BINS - 1 - np.arange(_BINS)) * gaps
    j = np.argmax(resid >= 0.0, axis=1)
    t = -np.take_along_axis(prefix, j[:, None], axis=1)[:, 0] / (_BINS - j)
    out[needs] = np.minimum(h + t[:, None], b[:, None])
    return out


def _tile_edges(extent: int, tiles: int) -> np.ndarray:
    return np.rint(np.linspace(0.0, float(extent), tiles + 1)).astype(int)


class _PlaneGeometry(NamedTuple):
    codes: np.ndarray  # (h, w) tile-origin code for the combined bincount
    counts: np.ndarray  # (ty * tx,) pixels per tile
    i0: np.ndarray  # per-row lower / upper tile indices
    i1: np.ndarray
    j0: np.ndarray  # per-column lower / upper tile indices
    j1: np.ndarray
    wy: np.ndarray  # (h, 1) float32 blend weight toward the upper tile
    wx: np.ndarray  # (1, w) float32 blend weight toward the right tile
    rseg: np.ndarray  # row / column spans sharing one tile pair
    cseg: np.ndarray


@lru_cache(maxsize=8)
def _plane_geometry(h: int, w: int, ty: int, tx: int) -> _PlaneGeometry:
    """Everything about the tile grid that does not depend on pixel values.

    Cached per plane shape and returned write-protected, since the blend
    loop runs once per frame on identical geometry.
    """
    ye = _tile_edges(h, ty)
    xe = _tile_edges(w, tx)
    row_code = np.repeat(np.arange(ty, dtype=np.intp) * (tx * _BINS), np.diff(ye))
    col_code = np.repeat(np.arange(tx, dtype=np.intp) * _BINS, np.diff(xe))
    codes = row_code[:, None] + col_code[None, :]
    counts = np.outer(np.diff(ye), np.diff(xe)).ravel().astype(float)

    cy = 0.5 * (ye[:-1] + ye[1:] - 1).astype(float)
    cx = 0.5 * (xe[:-1] + xe[1:] - 1).astype(float)
    rows = np.arange(h, dtype=float)
    cols = np.arange(w, dtype=float)
    i1 = np.clip(np.searchsorted(cy, rows), 0, ty - 1)
    i0 = np.clip(i1 - 1, 0, ty - 1)
    j1 = np.clip(np.searchsorted(cx, cols), 0, tx - 1)
    j0 = np.clip(j1 - 1, 0, tx - 1)
    span_y = cy[i1] - cy[i0]
    span_x = cx[j1] - cx[j0]
    wy = np.where(span_y > 0, (rows - cy[i0]) / np.where(span_y > 0, span_y, 1.0), 0.0)
    wx = np.where(span_x > 0, (cols - cx[j0]) / np.where(span_x > 0, span_x, 1.0), 0.0)
    wy = np.clip(wy, 0.0, 1.0).astype(np.float32)[:, None]
    wx = np.clip(wx, 0.0, 1.0).astype(np.float32)[None, :]
    rseg = np.concatenate(([0], np.flatnonzero(np.diff(i1)) + 1, [h]))
    cseg = np.concatenate(([0], np.flatnonzero(np.diff(j1)) + 1, [w]))
    geo = _PlaneGeometry(codes, counts, i0, i1, j0, j1, wy, wx, rseg, cseg)
    for arr in geo:
        arr.flags.writeable = False
    return geo


def _equalize_core(
    plane: np.ndarray, ty: int, tx: int, clip_limit: float
) -> tuple[np.ndarray, np.ndarray]:
    # Shared equalization core.  Returns the blended plane in the float32
    # "eq.out" scratch (values already inside [0,1]: the blend is a convex
    # combination of map entries) plus the fresh per-tile maps.
    h, w = plane.shape
    geo = _plane_geometry(h, w, ty, tx)
    levels = _scratch("eq.levels", (h, w), np.float64)
    # dtype pins the widening: a float32 plane must quantize exactly like
    # its float64 widening, not through a float32 multiply.
    np.multiply(plane, 255.0, out=levels, dtype=np.float64, casting="same_kind")
    levels += 0.5
    np.floor(levels, out=levels)
    np.clip(levels, 0, 255, out=levels)
    # Bin indices are kept at the platform index width: anything narrower
    # gets converted on every indexing operation anyway.
    q = _scratch("eq.q", (h, w), np.intp)
    np.copyto(q, levels, casting="unsafe")

    # One bincount over combined (tile, level) codes builds every tile
    # histogram at once.
    codes = _scratch("eq.codes", (h, w), np.intp)
    np.add(geo.codes, q, out=codes)
    hists = np.bincount(codes.ravel(), minlength=ty * tx * _BINS).astype(float)
    hists = hists.reshape(ty * tx, _BINS)
    beta = clip_limit * geo.counts / _BINS
    flat = _redistribute(hists, beta)
    cdf = np.cumsum(flat, axis=1)
    maps = (cdf - 0.5 * flat) / geo.counts[:, None]
    maps = maps.reshape(ty, tx, _BINS)

    # Blend in single precision; the 8-bit quantization step already caps
    # the useful precision well above float32 rounding.  Pixels sharing the
    # same tile-pair block see the same four lookup tables, so each block
    # is four 1-D table gathers and two in-place lerps of the a + (b-a)*w
    # form, all in per-block scratch to keep the loop allocation-free.
    m32 = _scratch("eq.m32", maps.shape, np.float32)
    np.copyto(m32, maps, casting="same_kind")
    out = _scratch("eq.out", (h, w), np.float32)
    i0, i1, j0, j1 = geo.i0, geo.i1, geo.j0, geo.j1
    for r0, r1 in zip(geo.rseg[:-1], geo.rseg[1:]):
        ia, ib = i0[r0], i1[r0]
        wyb = geo.wy[r0:r1]
        for c0, c1 in zip(geo.cseg[:-1], geo.cseg[1:]):
            ja, jb = j0[c0], j1[c0]
            qb = q[r0:r1, c0:c1]
            wxb = geo.wx[:, c0:c1]
            shape = qb.shape
            a = _scratch("eq.blk.a", shape, np.float32)
            b = _scratch("eq.blk.b", shape, np.float32)
            c = _scratch("eq.blk.c", shape, np.float32)
            np.take(m32[ia, ja], qb, out=a)
            np.take(m32[ia, jb], qb, out=b)
            b -= a
            b *= wxb
            a += b  # top edge interpolated along x
            np.take(m32[ib, ja], qb, out=c)
            np.take(m32[ib, jb], qb, out=b)
            b -= c
            b *= wxb
            c += b  # bottom edge interpolated along x
            c -= a
            c *= wyb
            a += c  # final interpolation along y
            out[r0:r1, c0:c1] = a
    return out, maps


def equalize_plane(
    plane: np.ndarray, tiles_x: int, tiles_y: int, clip_limit: float
) -> tuple[np.ndarray, np.ndarray]:
    """Equalize one [0,1] plane; returns (output plane, per-tile maps).

    The maps array has shape (tiles_y, tiles_x, 256) and gives each tile's
    value mapping in [0,1]; pixels blend the four surrounding tile maps
    bilinearly, with edge pixels clamped to the border tiles.
    """
    h, w = plane.shape
    # A grid finer than the image would create empty tiles; clamp quietly.
    ty = min(tiles_y, h)
    tx = min(tiles_x, w)
    out32, maps = _equalize_core(plane, ty, tx, clip_limit)
    return out32.astype(np.float64), maps


def clahe_lab(img: ImageBuf, cfg: ClaheConfig = ClaheConfig()) -> np.ndarray:
    """Equalize L in Lab space; returns (3,H,W) Lab planes, a and b untouched."""
    lab = rgb_to_lab(img)
    l_out, _ = equalize_plane(lab[0], cfg.tiles_x, cfg.tiles_y, cfg.clip_limit)
    return np.stack([l_out, lab[1], lab[2]])


def _clahe_rgb64(data: np.ndarray, cfg: ClaheConfig, prepped: bool = False) -> ImageBuf:
    # Color path on raw (3, H, W) planes, staying in float32 through the
    # Lab round trip; prepped follows _lab_planes32's contract.
    lab = _lab_planes32(data, prepped=prepped)
    ty = min(cfg.tiles_y, lab.shape[1])
    tx = min(cfg.tiles_x, lab.shape[2])
    l32, _ = _equalize_core(lab[0], ty, tx, cfg.clip_limit)
    np.copyto(lab[0], l32)
    return ImageBuf(_lab_inverse32(lab).astype(np.float64))


def clahe(img: ImageBuf, cfg: ClaheConfig = ClaheConfig()) -> ImageBuf:
    """Equalize lightness only; color planes pass through unchanged.

    Gray input is equalized directly.  A disabled config returns a copy.
    The color path runs its Lab round trip in single precision and is
    bit-identical to composing clahe_lab with the public inverse.
    """
    if not cfg.enabled:
        return img.copy()
    if img.channels == 1:
        out, _ = equalize_plane(img.data[0], cfg.tiles_x, cfg.tiles_y, cfg.clip_limit)
        return ImageBuf(out[None])
    return _clahe_rgb64(img.data, cfg)
