"""Forward degradation model for synthesizing underwater-looking frames.

Each channel is attenuated by a wavelength-dependent factor, blurred through
the turbulence OTF, and perturbed with additive Gaussian noise; the result
is clamped to [0, 1] as the final step.  With a fixed seed the output is
bit-reproducible, which makes the model usable as a test oracle for the
restoration path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft

from .image import ImageBuf
from .restore import _otf_rfft_half

__all__ = ["DegradeParams", "degrade"]


@dataclass(frozen=True)
class DegradeParams:
    """Degradation settings.

    k: turbulence intensity of the blur, >= 0.
    attenuation: per-channel transmission factors in [0, 1] (r, g, b).
    noise_sigma: standard deviation of the additive Gaussian noise, >= 0.
    seed: RNG seed for the noise draw.
    """

    k: float = 1.0
    attenuation: tuple[float, float, float] = (1.0, 1.0, 1.0)
    noise_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if not (self.k >= 0.0 and np.isfinite(self.k)):
            raise ValueError(f"k must be finite and >= 0, got {self.k}")
        if len(self.attenuation) != 3 or any(not (0.0 <= a <= 1.0) for a in self.attenuation):
            raise ValueError(f"attenuation must be three factors in [0,1], got {self.attenuation}")
        if not (self.noise_sigma >= 0.0 and np.isfinite(self.noise_sigma)):
            raise ValueError(f"noise_sigma must be finite and >= 0, got {self.noise_sigma}")


def degrade(img: ImageBuf, params: DegradeParams) -> ImageBuf:
    """Apply attenuation, turbulence blur, and noise; clamp last."""
    h, w = img.height, img.width
    otf = _otf_rfft_half(h, w, float(params.k))
    rng = np.random.default_rng(params.seed)
    out = np.empty_like(img.data)
    for c in range(img.channels):
        att = params.attenuation[c] if img.channels == 3 else params.attenuation[0]
        blurred = sfft.irfft2(otf * sfft.rfft2(att * img.data[c]), s=(h, w))
        if params.noise_sigma > 0.0:
            blurred = blurred + rng.normal(0.0, params.noise_sigma, size=(h, w))
        out[c] = blurred
    return ImageBuf(np.clip(out, 0.0, 1.0))
