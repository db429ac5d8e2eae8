"""Receptive-field geometry for strided convolution chains.

Maps a cell of a downsampled feature grid back to the input-pixel box that
feeds it.  Used to evaluate image statistics over exactly the region a
discriminator cell sees, and exposed on the command line for inspection.

Folding from the output side, one layer grows a receptive field as
rf_in = (rf_out - 1) * stride + kernel, and a cell's input span follows
x_min' = x_min * stride - padding, x_max' = x_max * stride - padding +
kernel - 1 (0-indexed, inclusive).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

__all__ = [
    "LayerSpec",
    "RfBox",
    "map_size",
    "rf_chain",
    "rf_size",
    "rf_box",
    "STEM",
    "ADVERSARIAL_BRANCH",
    "UNDERWATER_BRANCH",
    "ADVERSARIAL_CHAIN",
    "UNDERWATER_CHAIN",
    "preset_chain",
]


@dataclass(frozen=True)
class LayerSpec:
    """One convolution layer's geometry: kernel, stride, padding."""

    kernel: int
    stride: int = 1
    padding: int = 0

    def __post_init__(self) -> None:
        if self.kernel < 1:
            raise ValueError(f"kernel must be >= 1, got {self.kernel}")
        if self.stride < 1:
            raise ValueError(f"stride must be >= 1, got {self.stride}")
        if self.padding < 0:
            raise ValueError(f"padding must be >= 0, got {self.padding}")


@dataclass(frozen=True)
class RfBox:
    """Inclusive input-pixel box for one output cell.

    size is the unclipped side length; the min/max fields are clipped to
    the input extent, so boxes at the border may be smaller than size.
    """

    x_min: int
    x_max: int
    y_min: int
    y_max: int
    size: int


def map_size(layers: Sequence[LayerSpec], input_extent: int) -> list[int]:
    """Feature extents after each layer, starting from the input extent."""
    if input_extent < 1:
        raise ValueError(f"input extent must be >= 1, got {input_extent}")
    sizes = [input_extent]
    for sp in layers:
        n = (sizes[-1] + 2 * sp.padding - sp.kernel) // sp.stride + 1
        if n < 1:
            raise ValueError(
                f"chain consumes the input: extent {sizes[-1]} with kernel "
                f"{sp.kernel} stride {sp.stride} padding {sp.padding}"
            )
        sizes.append(n)
    return sizes


def rf_chain(layers: Sequence[LayerSpec], out_size: int = 1) -> list[int]:
    """Receptive-field sizes per layer, input side first.

    Element i is the input span of layer i feeding one cell of the final
    output; the last element is out_size itself.
    """
    if not layers:
        raise ValueError("chain must contain at least one layer")
    if out_size < 1:
        raise ValueError(f"out_size must be >= 1, got {out_size}")
    sizes = [out_size]
    for sp in reversed(layers):
        sizes.append((sizes[-1] - 1) * sp.stride + sp.kernel)
    sizes.reverse()
    return sizes


def rf_size(layers: Sequence[LayerSpec]) -> int:
    """Full-chain receptive field of a single output cell."""
    return rf_chain(layers)[0]


def rf_box(layers: Sequence[LayerSpec], cell: tuple[int, int], input_extent: int) -> RfBox:
    """Input-pixel box feeding the output cell (x, y) on a square input."""
    sizes = map_size(layers, input_extent)
    out = sizes[-1]
    x, y = cell
    if not (0 <= x < out and 0 <= y < out):
        raise ValueError(f"cell {cell} outside the {out}x{out} output grid")
    x_min = x_max = x
    y_min = y_max = y
    for sp in reversed(layers):
        x_min = x_min * sp.stride - sp.padding
        x_max = x_max * sp.stride - sp.padding + sp.kernel - 1
        y_min = y_min * sp.stride - sp.padding
        y_max = y_max * sp.stride - sp.padding + sp.kernel - 1
    size = x_max - x_min + 1
    hi = input_extent - 1
    return RfBox(
        x_min=max(x_min, 0),
        x_max=min(x_max, hi),
        y_min=max(y_min, 0),
        y_max=min(y_max, hi),
        size=size,
    )


# Discriminator geometry: shared stem, then the adversarial branch (realism)
# and the underwater branch (water-quality statistics over larger context).
STEM: tuple[LayerSpec, ...] = (LayerSpec(4, 2, 1),)
ADVERSARIAL_BRANCH: tuple[LayerSpec, ...] = (LayerSpec(4, 2, 1),) * 3 + (LayerSpec(4, 1, 1),) * 2
UNDERWATER_BRANCH: tuple[LayerSpec, ...] = (LayerSpec(4, 2, 1),) * 5 + (LayerSpec(4, 1, 1),) * 2
ADVERSARIAL_CHAIN: tuple[LayerSpec, ...] = STEM + ADVERSARIAL_BRANCH
UNDERWATER_CHAIN: tuple[LayerSpec, ...] = STEM + UNDERWATER_BRANCH

_PRESETS = {
    "stem": STEM,
    "ab": ADVERSARIAL_BRANCH,
    "ub": UNDERWATER_BRANCH,
    "stem+ab": ADVERSARIAL_CHAIN,
    "stem+ub": UNDERWATER_CHAIN,
}


def preset_chain(name: str) -> tuple[LayerSpec, ...]:
    """Look up a named layer chain; raises on unknown names."""
    try:
        return _PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown chain preset {name!r}; options: {sorted(_PRESETS)}") from None
