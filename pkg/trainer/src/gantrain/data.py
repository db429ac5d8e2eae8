"""Paired dataset over the exporter's A/B directory layout."""

from __future__ import annotations

import json
import logging
import os
from pathlib import Path

import numpy as np
import torch
from PIL import Image

__all__ = ["PairDataset", "load_frame", "save_frame"]

log = logging.getLogger(__name__)


def load_frame(path: str | Path) -> torch.Tensor:
    """Read an image file to a planar float32 (3, H, W) tensor in [0, 1]."""
    with Image.open(path) as im:
        arr = np.asarray(im.convert("RGB"), dtype=np.float32) / 255.0
    return torch.from_numpy(np.ascontiguousarray(arr.transpose(2, 0, 1)))


def save_frame(tensor: torch.Tensor, path: str | Path) -> None:
    """Write a (3, H, W) [0, 1] tensor as an 8-bit image, rounding half up."""
    arr = tensor.detach().cpu().numpy()
    levels = np.clip(np.floor(arr * 255.0 + 0.5), 0, 255).astype(np.uint8)
    Image.fromarray(levels.transpose(1, 2, 0)).save(path)


class PairDataset(torch.utils.data.Dataset):
    """Aligned (input, target) frame pairs from an A/B export directory.

    The manifest's name list drives the pairing when present, otherwise
    the sorted contents of A/.  A name missing its counterpart is skipped
    with a warning; an empty result is an error.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)
        a_dir = self.root / "A"
        b_dir = self.root / "B"
        if not a_dir.is_dir() or not b_dir.is_dir():
            raise ValueError(f"{self.root} lacks the A/ and B/ pair directories")
        manifest = self.root / "manifest.json"
        if manifest.is_file():
            with open(manifest, "r", encoding="utf-8") as fh:
                names = json.load(fh)["names"]
        else:
            names = sorted(os.listdir(a_dir))
        self.pairs: list[tuple[Path, Path]] = []
        for name in names:
            a, b = a_dir / name, b_dir / name
            if not a.is_file() or not b.is_file():
                log.warning("skipping %s: missing counterpart", name)
                continue
            self.pairs.append((a, b))
        if not self.pairs:
            raise ValueError(f"no usable pairs under {self.root}")

    def __len__(self) -> int:
        return len(self.pairs)

    def __getitem__(self, idx: int) -> tuple[torch.Tensor, torch.Tensor]:
        a, b = self.pairs[idx]
        return load_frame(a), load_frame(b)
