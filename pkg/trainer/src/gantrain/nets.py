"""Generator and dual-branch discriminator architectures."""

from __future__ import annotations

import torch
import torch.nn as nn

from .uwindex import FULL_INDEX_CHAIN, TOY_INDEX_CHAIN

__all__ = [
    "ResidualBlock",
    "Generator",
    "Discriminator",
    "index_chain",
    "init_weights",
]


class ResidualBlock(nn.Module):
    """Two reflection-padded 3x3 convs with a skip; dropout supplies noise."""

    def __init__(self, channels: int = 256):
        super().__init__()
        self.body = nn.Sequential(
            nn.ReflectionPad2d(1),
            nn.Conv2d(channels, channels, 3, 1, 0),
            nn.BatchNorm2d(channels),
            nn.ReLU(inplace=True),
            nn.Dropout(0.5),
            nn.ReflectionPad2d(1),
            nn.Conv2d(channels, channels, 3, 1, 0),
            nn.BatchNorm2d(channels),
        )

    def forward(self, x):
        return x + self.body(x)


class Generator(nn.Module):
    """Downsample, 9 residual blocks, upsample; tanh mapped to [0, 1].

    Spatial extents must be multiples of 4 (two stride-2 stages each way);
    output shape equals input shape.
    """

    def __init__(self, in_channels: int = 3, out_channels: int = 3):
        super().__init__()
        self.body = nn.Sequential(
            nn.ReflectionPad2d(3),
            nn.Conv2d(in_channels, 64, 7, 1, 0),
            nn.BatchNorm2d(64),
            nn.ReLU(inplace=True),
            nn.Conv2d(64, 128, 3, 2, 1),
            nn.BatchNorm2d(128),
            nn.ReLU(inplace=True),
            nn.Conv2d(128, 256, 3, 2, 1),
            nn.BatchNorm2d(256),
            nn.ReLU(inplace=True),
            *[ResidualBlock(256) for _ in range(9)],
            nn.ConvTranspose2d(256, 128, 3, 2, 1, output_padding=1),
            nn.BatchNorm2d(128),
            nn.ReLU(inplace=True),
            nn.ConvTranspose2d(128, 64, 3, 2, 1, output_padding=1),
            nn.BatchNorm2d(64),
            nn.ReLU(inplace=True),
            nn.ReflectionPad2d(3),
            nn.Conv2d(64, out_channels, 7, 1, 0),
            nn.Tanh(),
        )

    def forward(self, x):
        if x.shape[-1] % 4 or x.shape[-2] % 4:
            raise ValueError(f"spatial extents must be multiples of 4, got {tuple(x.shape[-2:])}")
        return (self.body(x) + 1.0) * 0.5


def _cbl(in_ch: int, out_ch: int, stride: int) -> list[nn.Module]:
    # conv + batch norm + leaky rectifier, the branch building block
    return [
        nn.Conv2d(in_ch, out_ch, 4, stride, 1),
        nn.BatchNorm2d(out_ch),
        nn.LeakyReLU(0.2, inplace=True),
    ]


class Discriminator(nn.Module):
    """Shared stem feeding an adversarial branch and an index branch.

    The adversarial branch scores local realism patches; the index branch
    regresses the per-patch underwater index.  For 512 inputs the full
    preset yields a 30x30 adversarial map and a 6x6 index map; the toy
    preset yields 7x7 and 6x6 maps for 64 inputs.
    """

    def __init__(self, in_channels: int = 6, preset: str = "full"):
        super().__init__()
        self.preset = preset
        self.stem = nn.Sequential(
            nn.Conv2d(in_channels, 64, 4, 2, 1),
            nn.LeakyReLU(0.2, inplace=True),
        )
        if preset == "full":
            self.adversarial = nn.Sequential(
                *_cbl(64, 128, 2),
                *_cbl(128, 256, 2),
                *_cbl(256, 512, 2),
                *_cbl(512, 512, 1),
                nn.Conv2d(512, 1, 4, 1, 1),
            )
            self.index = nn.Sequential(
                *_cbl(64, 128, 2),
                *_cbl(128, 256, 2),
                *_cbl(256, 512, 2),
                *_cbl(512, 512, 2),
                *_cbl(512, 512, 2),
                *_cbl(512, 512, 1),
                nn.Conv2d(512, 1, 4, 1, 1),
            )
        elif preset == "toy":
            self.adversarial = nn.Sequential(
                *_cbl(64, 128, 2),
                *_cbl(128, 256, 2),
                nn.Conv2d(256, 1, 4, 1, 1),
            )
            self.index = nn.Sequential(
                *_cbl(64, 128, 2),
                *_cbl(128, 256, 2),
                *_cbl(256, 256, 1),
                nn.Conv2d(256, 1, 4, 1, 1),
            )
        else:
            raise ValueError(f"preset must be 'full' or 'toy', got {preset!r}")

    def forward(self, x):
        shared = self.stem(x)
        return self.adversarial(shared), self.index(shared)


def index_chain(preset: str) -> tuple[tuple[int, int, int], ...]:
    """Stem-plus-index-branch conv geometry for patch target computation."""
    if preset == "full":
        return FULL_INDEX_CHAIN
    if preset == "toy":
        return TOY_INDEX_CHAIN
    raise ValueError(f"preset must be 'full' or 'toy', got {preset!r}")


def init_weights(module: nn.Module) -> None:
    """Gaussian(0, 0.02) conv init, Gaussian(1, 0.02) norm scales."""
    for m in module.modules():
        if isinstance(m, (nn.Conv2d, nn.ConvTranspose2d)):
            nn.init.normal_(m.weight, 0.0, 0.02)
            if m.bias is not None:
                nn.init.zeros_(m.bias)
        elif isinstance(m, nn.BatchNorm2d):
            nn.init.normal_(m.weight, 1.0, 0.02)
            nn.init.zeros_(m.bias)
