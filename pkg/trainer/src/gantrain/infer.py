"""Generator-only inference over saved frames."""

from __future__ import annotations

import logging
import time
from pathlib import Path

import torch
import torch.nn.functional as F

from .data import load_frame, save_frame
from .nets import Generator

__all__ = ["load_generator", "restore_tensor", "restore_frames"]

log = logging.getLogger(__name__)


def load_generator(checkpoint: str | Path) -> Generator:
    """Rebuild the generator from a checkpoint, in eval mode."""
    state = torch.load(checkpoint, map_location="cpu", weights_only=True)
    generator = Generator()
    generator.load_state_dict(state["generator"])
    generator.eval()
    return generator


def restore_tensor(generator: Generator, frame: torch.Tensor) -> torch.Tensor:
    """Run one (3, H, W) frame through the generator.

    Extents that are not multiples of 4 are reflection-padded up and the
    output cropped back, so any frame size round-trips to its own shape.
    Output values are clamped to [0, 1].
    """
    h, w = frame.shape[-2:]
    pad_h = (-h) % 4
    pad_w = (-w) % 4
    batch = frame[None]
    if pad_h or pad_w:
        batch = F.pad(batch, (0, pad_w, 0, pad_h), mode="reflect")
    with torch.no_grad():
        out = generator(batch)[0, :, :h, :w]
    return out.clamp(0.0, 1.0)


def restore_frames(
    checkpoint: str | Path, frames: list[Path], out_dir: str | Path
) -> list[Path]:
    """Restore each frame file into out_dir; logs the measured rate."""
    generator = load_generator(checkpoint)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    start = time.perf_counter()
    for path in frames:
        restored = restore_tensor(generator, load_frame(path))
        dest = out / Path(path).name
        save_frame(restored, dest)
        written.append(dest)
    elapsed = time.perf_counter() - start
    if written:
        log.info("restored %d frame(s) in %.2f s (%.1f fps)",
                 len(written), elapsed, len(written) / elapsed)
    return written
