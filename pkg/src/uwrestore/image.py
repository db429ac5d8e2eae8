"""Planar float image container, color transforms, and 8-bit file I/O.

Images are stored as (channels, height, width) float64 arrays with values
in [0, 1].  Grayscale data uses a single channel.  All transforms are
deterministic: identical inputs produce bit-identical outputs.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass

import numpy as np
from PIL import Image

__all__ = [
    "ImageBuf",
    "load_image",
    "save_image",
    "to_gray",
    "rgb_to_lab",
    "lab_to_rgb",
    "histogram",
    "channel_stats",
    "resize",
]

# sRGB -> XYZ (D65) and its inverse.
_RGB_TO_XYZ = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ]
)
_XYZ_TO_RGB = np.linalg.inv(_RGB_TO_XYZ)
# D65 white as the matrix row sums, so neutral inputs land exactly on a=b=0.
_WHITE = _RGB_TO_XYZ.sum(axis=1)
_RGB_TO_XYZ32 = _RGB_TO_XYZ.astype(np.float32)
_XYZ_TO_RGB32 = _XYZ_TO_RGB.astype(np.float32)
_WHITE32 = _WHITE.astype(np.float32)
_LAB_EPS = 216.0 / 24389.0
_LAB_KAPPA = 24389.0 / 27.0

_GRAY_WEIGHTS = np.array([0.299, 0.587, 0.114])  # BT.601 luma

_POOL = threading.local()


def _scratch(name: str, shape: tuple, dtype) -> np.ndarray:
    """Reusable per-thread work buffer; contents are undefined on entry.

    Batch restoration allocates the same multi-megabyte temporaries for
    every frame, and churning them through the allocator costs more than
    the arithmetic they hold.  One buffer lives per name; a new shape or
    dtype under the same name replaces it.  Callers must fully overwrite a
    buffer before reading it and must not let one escape, since the next
    call with the same name reuses the memory.
    """
    store = getattr(_POOL, "arrays", None)
    if store is None:
        store = _POOL.arrays = {}
    arr = store.get(name)
    if arr is None or arr.shape != shape or arr.dtype != dtype:
        arr = np.empty(shape, dtype)
        store[name] = arr
    return arr


@dataclass
class ImageBuf:
    """Planar floating-point image.

    data: (C, H, W) float64 array, values in [0, 1], C in {1, 3}.
    """

    data: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim != 3 or arr.shape[0] not in (1, 3):
            raise ValueError(f"expected (C,H,W) planes with C in {{1,3}}, got {arr.shape}")
        if arr.shape[1] < 1 or arr.shape[2] < 1:
            raise ValueError("image must have at least one pixel")
        self.data = arr

    @property
    def channels(self) -> int:
        return self.data.shape[0]

    @property
    def height(self) -> int:
        return self.data.shape[1]

    @property
    def width(self) -> int:
        return self.data.shape[2]

    @classmethod
    def from_hwc(cls, arr: np.ndarray) -> "ImageBuf":
        """Build from an interleaved (H, W) or (H, W, C) array."""
        arr = np.asarray(arr, dtype=np.float64)
        if arr.ndim == 2:
            arr = arr[None, :, :]
        elif arr.ndim == 3:
            arr = np.moveaxis(arr, -1, 0)
        else:
            raise ValueError(f"expected 2-D or 3-D array, got shape {arr.shape}")
        return cls(arr.copy())

    def to_hwc(self) -> np.ndarray:
        """Interleaved (H, W, C) copy; (H, W) for single-channel images."""
        if self.channels == 1:
            return self.data[0].copy()
        return np.moveaxis(self.data, 0, -1).copy()

    def copy(self) -> "ImageBuf":
        return ImageBuf(self.data.copy())


def load_image(path: str | os.PathLike) -> ImageBuf:
    """Read an 8-bit PNG/JPEG/BMP file into [0, 1] float planes."""
    with Image.open(path) as im:
        if im.mode in ("L", "I;16", "I"):
            im = im.convert("L")
            arr = np.asarray(im, dtype=np.float64) / 255.0
            return ImageBuf(arr[None, :, :])
        im = im.convert("RGB")
        arr = np.asarray(im, dtype=np.float64) / 255.0
        return ImageBuf(np.moveaxis(arr, -1, 0).copy())


def save_image(img: ImageBuf, path: str | os.PathLike) -> None:
    """Write as 8-bit, rounding half up; format from the file extension."""
    arr = np.clip(img.data, 0.0, 1.0)
    q = np.floor(arr * 255.0 + 0.5).astype(np.uint8)
    if img.channels == 1:
        pil = Image.fromarray(q[0], mode="L")
    else:
        pil = Image.fromarray(np.moveaxis(q, 0, -1), mode="RGB")
    pil.save(path)


def to_gray(img: ImageBuf) -> np.ndarray:
    """BT.601 luma map of a 3-channel image, shape (H, W)."""
    if img.channels != 3:
        raise ValueError("gray conversion requires a 3-channel image")
    return np.tensordot(_GRAY_WEIGHTS, img.data, axes=([0], [0]))


# The piecewise curves below transform their argument in place (and return
# it): the power branch runs over the whole array and the usually sparse
# linear-branch pixels are patched afterwards, skipping the full-size
# temporaries a np.where over both branches would make.  The branch masks
# live in scratch buffers keyed per curve.


def _mask(name: str, arr: np.ndarray, thresh: float) -> np.ndarray:
    m = _scratch(name, arr.shape, np.bool_)
    np.less_equal(arr, thresh, out=m)
    return m


def _lab_f(t: np.ndarray) -> np.ndarray:
    small = _mask("mask.labf", t, _LAB_EPS)
    low = (_LAB_KAPPA * t[small] + 16.0) / 116.0
    np.cbrt(t, out=t)
    t[small] = low
    return t


def _lab_f_inv(f: np.ndarray, out: np.ndarray) -> np.ndarray:
    np.multiply(f, f, out=out)
    out *= f
    small = _mask("mask.labinv", out, _LAB_EPS)
    out[small] = (116.0 * f[small] - 16.0) / _LAB_KAPPA
    return out


def _srgb_to_linear(c: np.ndarray) -> np.ndarray:
    small = _mask("mask.tolin", c, 0.04045)
    low = c[small] / 12.92
    c += 0.055
    c /= 1.055
    np.power(c, 2.4, out=c)
    c[small] = low
    return c


def _linear_to_srgb(c: np.ndarray) -> np.ndarray:
    np.maximum(c, 0.0, out=c)
    small = _mask("mask.tosrgb", c, 0.0031308)
    low = c[small] * 12.92
    np.power(c, 1.0 / 2.4, out=c)
    c *= 1.055
    c -= 0.055
    c[small] = low
    return c


def _lab_planes32(data: np.ndarray, prepped: bool = False) -> np.ndarray:
    # Single-precision Lab forward pass shared by the public conversion and
    # the equalization pipeline, which stays in float32 end to end.  The
    # returned buffer is scratch ("lab.fwd.out"): consume or copy it before
    # the next conversion on the same thread.  With prepped=True the input
    # must already be the clamped float32 "lab.fwd.rgb" scratch; the pass
    # consumes it in place.
    shape = data.shape
    if prepped:
        srgb = data
    else:
        srgb = _scratch("lab.fwd.rgb", shape, np.float32)
        np.copyto(srgb, data, casting="same_kind")
        np.clip(srgb, 0.0, 1.0, out=srgb)
    # Channels that agree after clamping are achromatic by definition; zero
    # a and b there exactly so rounding residue cannot leak into chroma
    # statistics.  Taken before the curve below consumes srgb.
    neutral = _scratch("mask.neutral", shape[1:], np.bool_)
    np.equal(srgb[0], srgb[1], out=neutral)
    pair = _scratch("mask.neutral2", shape[1:], np.bool_)
    np.equal(srgb[1], srgb[2], out=pair)
    neutral &= pair
    lin = _srgb_to_linear(srgb)
    xyz = _scratch("lab.fwd.xyz", shape, np.float32)
    np.matmul(_RGB_TO_XYZ32, lin.reshape(3, -1), out=xyz.reshape(3, -1))
    xyz /= _WHITE32[:, None, None]
    fxyz = _lab_f(xyz)
    out = _scratch("lab.fwd.out", shape, np.float32)
    np.multiply(fxyz[1], 116.0, out=out[0])  # L
    out[0] -= 16.0
    np.subtract(fxyz[0], fxyz[1], out=out[1])
    out[1] *= 500.0  # a
    np.subtract(fxyz[1], fxyz[2], out=out[2])
    out[2] *= 200.0  # b
    out[1][neutral] = 0.0
    out[2][neutral] = 0.0
    out[0] /= 100.0
    out[1] /= 128.0
    out[2] /= 128.0
    np.clip(out[0], 0.0, 1.0, out=out[0])
    np.clip(out[1:], -1.0, 1.0, out=out[1:])
    return out


def _lab_inverse32(lab: np.ndarray) -> np.ndarray:
    # Single-precision inverse; returns clamped (3, H, W) float32 sRGB in
    # the "lab.inv.out" scratch buffer: consume or copy before the next
    # inverse on the same thread.  Safe on the forward pass's output.
    shape = lab.shape
    f = _scratch("lab.inv.f", shape, np.float32)
    fx, fy, fz = f[0], f[1], f[2]
    np.multiply(lab[0], 100.0, out=fy)
    fy += 16.0
    fy /= 116.0
    np.multiply(lab[1], 128.0, out=fx)
    fx /= 500.0
    fx += fy
    np.multiply(lab[2], 128.0, out=fz)
    fz /= 200.0
    np.subtract(fy, fz, out=fz)
    xyz = _lab_f_inv(f, out=_scratch("lab.inv.xyz", shape, np.float32))
    xyz *= _WHITE32[:, None, None]
    rgb = _scratch("lab.inv.out", shape, np.float32)
    np.matmul(_XYZ_TO_RGB32, xyz.reshape(3, -1), out=rgb.reshape(3, -1))
    _linear_to_srgb(rgb)
    np.clip(rgb, 0.0, 1.0, out=rgb)
    return rgb


def rgb_to_lab(img: ImageBuf) -> np.ndarray:
    """Convert to normalized CIE 1976 Lab (D65).

    Returns a (3, H, W) array: plane 0 is L/100 in [0, 1], planes 1 and 2
    are a/128 and b/128 in [-1, 1].  Values are clamped to those ranges.
    Computed in single precision (value error ~1e-6, far inside the
    round-trip tolerance); pixels whose channels agree after clamping to
    [0, 1] get a = b = 0 exactly.
    """
    if img.channels != 3:
        raise ValueError("Lab conversion requires a 3-channel image")
    return _lab_planes32(img.data).astype(np.float64)


def lab_to_rgb(lab: np.ndarray) -> ImageBuf:
    """Inverse of rgb_to_lab; output clamped to [0, 1]."""
    lab = np.asarray(lab, dtype=np.float32)
    if lab.ndim != 3 or lab.shape[0] != 3:
        raise ValueError(f"expected (3,H,W) Lab planes, got {lab.shape}")
    return ImageBuf(_lab_inverse32(lab).astype(np.float64))


def histogram(values: np.ndarray) -> np.ndarray:
    """256-bin histogram of [0, 1] values.

    Bin index is floor(v * 255 + 0.5) clamped to [0, 255], i.e. the 8-bit
    level the value would quantize to.  Returns int64 counts summing to the
    number of samples.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise ValueError("histogram of an empty array")
    bins = np.floor(values * 255.0 + 0.5).astype(np.int64)
    np.clip(bins, 0, 255, out=bins)
    return np.bincount(bins.ravel(), minlength=256)


def channel_stats(img: ImageBuf) -> tuple[np.ndarray, np.ndarray]:
    """Per-channel mean and population standard deviation."""
    flat = img.data.reshape(img.channels, -1)
    means = flat.mean(axis=1)
    stds = flat.std(axis=1)  # population (ddof=0)
    return means, stds


def resize(img: ImageBuf, height: int, width: int) -> ImageBuf:
    """Bilinear resample to (height, width)."""
    if height < 1 or width < 1:
        raise ValueError("target size must be positive")
    planes = []
    for plane in img.data:
        pil = Image.fromarray(plane.astype(np.float32), mode="F")
        planes.append(np.asarray(pil.resize((width, height), Image.BILINEAR), dtype=np.float64))
    return ImageBuf(np.clip(np.stack(planes), 0.0, 1.0))
