"""Frequency-domain restoration: turbulence OTF, Wiener deconvolution, and
percentile channel normalization.

The optical transfer function models scattering blur as
H(u, v) = exp(-k * (u^2 + v^2)^(5/6)) over normalized frequencies
u, v in [-0.5, 0.5).  Wiener deconvolution divides it out with a
noise-ratio floor, and channel normalization restretches each channel
between its 0.1th and 99.9th percentiles to cancel the wavelength-dependent
attenuation cast.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft

from .image import ImageBuf, _scratch

__all__ = [
    "FilterParams",
    "build_turbulence_otf",
    "wiener_deconvolve",
    "normalize_channels",
    "restore",
]

PERCENTILE_LOW = 0.1
PERCENTILE_HIGH = 99.9


@dataclass(frozen=True)
class FilterParams:
    """Restoration filter parameters.

    k: turbulence intensity of the blur model, k >= 0.
    noise_ratio: reciprocal signal-to-noise ratio used by the Wiener
        filter, >= 0.
    """

    k: float = 1.0
    noise_ratio: float = 0.01

    def __post_init__(self) -> None:
        if not (self.k >= 0.0 and np.isfinite(self.k)):
            raise ValueError(f"k must be finite and >= 0, got {self.k}")
        if not (self.noise_ratio >= 0.0 and np.isfinite(self.noise_ratio)):
            raise ValueError(f"noise_ratio must be finite and >= 0, got {self.noise_ratio}")


def _radial_term(freq_y: np.ndarray, freq_x: np.ndarray) -> np.ndarray:
    r2 = freq_y[:, None] ** 2 + freq_x[None, :] ** 2
    return r2 ** (5.0 / 6.0)


def build_turbulence_otf(height: int, width: int, k: float) -> np.ndarray:
    """Turbulence OTF sampled in FFT-native frequency ordering.

    Returns an (height, width) array of gains in (0, 1]; the (0, 0) entry
    (zero frequency) is exactly 1.  k = 0 gives an all-ones transfer.
    """
    if height < 1 or width < 1:
        raise ValueError("OTF shape must be positive")
    if not (k >= 0.0 and np.isfinite(k)):
        raise ValueError(f"k must be finite and >= 0, got {k}")
    return np.exp(-k * _radial_term(np.fft.fftfreq(height), np.fft.fftfreq(width)))


@functools.lru_cache(maxsize=32)
def _otf_rfft_half(height: int, width: int, k: float) -> np.ndarray:
    # Half-plane OTF matching rfft2 layout; cached per (size, k) so batch
    # restoration rebuilds it only when the frame size or k changes.
    out = np.exp(-k * _radial_term(np.fft.fftfreq(height), np.fft.rfftfreq(width)))
    out.setflags(write=False)
    return out


def wiener_deconvolve(img: ImageBuf, params: FilterParams) -> np.ndarray:
    """Wiener-deconvolve every channel against the turbulence OTF.

    Returns raw (C, H, W) float64 planes.  The output is intentionally not
    clamped to [0, 1]: channel normalization consumes it as-is.  The FFT
    math runs in single precision, which is ample for 8-bit imagery and
    roughly halves the per-frame cost.
    """
    return _wiener_raw32(img, params).astype(np.float64)


def _wiener_raw32(img: ImageBuf, params: FilterParams) -> np.ndarray:
    # Shared filter core; the float32 result is a fresh array, but callers
    # inside this package consume it immediately instead of widening.
    h, w = img.height, img.width
    gain = _wiener_gain(h, w, float(params.k), float(params.noise_ratio))
    src = _scratch("wiener.src", img.data.shape, np.float32)
    np.copyto(src, img.data, casting="same_kind")
    spec = sfft.rfft2(src, axes=(1, 2), overwrite_x=True)
    spec *= gain
    return sfft.irfft2(spec, s=(h, w), axes=(1, 2), overwrite_x=True)


@functools.lru_cache(maxsize=8)
def _wiener_gain(height: int, width: int, k: float, noise_ratio: float) -> np.ndarray:
    otf = _otf_rfft_half(height, width, k)
    # H is real, so the conjugate in H* / (|H|^2 + R) is H itself.
    gain = (otf / (otf * otf + noise_ratio)).astype(np.float32)
    gain.setflags(write=False)
    return gain


def _percentile_pair(plane: np.ndarray, q_low: float, q_high: float) -> tuple[float, float]:
    """Two linear-interpolated percentiles from one partial sort.

    Selection runs on a float32 copy: rounding is monotone, so the picked
    order statistics are the float32 roundings of the exact ones.  That
    error is far below any consumer's tolerance and halves the cost.
    """
    flat = _scratch("pct.flat", (plane.size,), np.float32)
    np.copyto(flat, plane.ravel(), casting="same_kind")
    n = flat.size
    values = []
    for q in (q_low, q_high):
        rank = q / 100.0 * (n - 1)
        lo = int(rank)
        t = rank - lo
        # One kth per partition: selecting two ranks in a single call is an
        # order of magnitude slower, and the ceil-rank element is just the
        # minimum of the tail above the floor rank.
        flat.partition(lo)
        a = float(flat[lo])
        b = float(flat[lo + 1 :].min()) if t > 0.0 and lo + 1 < n else a
        values.append(b - (b - a) * (1.0 - t) if t >= 0.5 else a + (b - a) * t)
    return values[0], values[1]


def _normalize_into(src: np.ndarray, dst: np.ndarray) -> None:
    # Channel stretch core; src may be float32 (the math is done in float64
    # either way, so the result matches widening src first).  A float32 dst
    # likewise matches computing in float64 and rounding once at the end:
    # the divide stores through a downcast and clamping commutes with it
    # because 0 and 1 are exact in both widths.
    f32_dst = dst.dtype == np.float32
    for c in range(src.shape[0]):
        lo, hi = _percentile_pair(src[c], PERCENTILE_LOW, PERCENTILE_HIGH)
        if hi - lo < 1e-12:
            dst[c].fill(0.5)
        elif f32_dst:
            tmp = _scratch("norm.tmp", src[c].shape, np.float64)
            np.subtract(src[c], lo, out=tmp, dtype=np.float64)
            np.divide(tmp, hi - lo, out=dst[c])
            np.clip(dst[c], 0.0, 1.0, out=dst[c])
        else:
            np.subtract(src[c], lo, out=dst[c], dtype=np.float64)
            dst[c] /= hi - lo
            np.clip(dst[c], 0.0, 1.0, out=dst[c])


def normalize_channels(planes: np.ndarray | ImageBuf) -> ImageBuf:
    """Affine-stretch each channel so its 0.1th percentile maps to 0 and its
    99.9th percentile maps to 1, clamping the result.

    A channel with no spread between those percentiles becomes constant 0.5.
    Accepts raw (unclamped) planes, e.g. straight from wiener_deconvolve.
    """
    data = planes.data if isinstance(planes, ImageBuf) else np.asarray(planes, dtype=np.float64)
    if data.ndim != 3:
        raise ValueError(f"expected (C,H,W) planes, got shape {data.shape}")
    out = np.empty_like(data)
    _normalize_into(data, out)
    return ImageBuf(out)


def restore(
    img: ImageBuf,
    params: FilterParams,
    clahe_cfg: "ClaheConfig | None" = None,
) -> ImageBuf:
    """Full restoration pipeline: Wiener deconvolution, channel
    normalization, then adaptive histogram equalization of lightness.

    clahe_cfg=None applies the default equalization settings; pass a config
    with enabled=False to stop after channel normalization.  Output is
    bit-identical to composing the three public stages; the intermediates
    just live in reused buffers to keep batch restoration fast.
    """
    from .clahe import ClaheConfig, _clahe_rgb64, equalize_plane

    cfg = clahe_cfg if clahe_cfg is not None else ClaheConfig()
    raw = _wiener_raw32(img, params)
    if cfg.enabled and img.channels == 3:
        # The color path rounds to float32 at the Lab boundary anyway, so
        # normalize straight into the conversion's input scratch.
        rgb32 = _scratch("lab.fwd.rgb", raw.shape, np.float32)
        _normalize_into(raw, rgb32)
        return _clahe_rgb64(rgb32, cfg, prepped=True)
    balanced = _scratch("restore.balanced", raw.shape, np.float64)
    _normalize_into(raw, balanced)
    if not cfg.enabled:
        return ImageBuf(balanced.copy())
    out, _ = equalize_plane(balanced[0], cfg.tiles_x, cfg.tiles_y, cfg.clip_limit)
    return ImageBuf(out[None])
