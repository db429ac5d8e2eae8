import subprocess

import numpy as np
import pytest
from PIL import Image

from gantrain import TrainConfig, train


def synth_frames(count: int, size: int = 64, seed: int = 11) -> list[np.ndarray]:
    """Deterministic murky test frames: smooth texture, cast, veil, noise."""
    rng = np.random.default_rng(seed)
    frames = []
    for _ in range(count):
        low = rng.random((3, 8, 8)).astype(np.float32)
        planes = np.stack(
            [
                np.asarray(
                    Image.fromarray((low[c] * 255).astype(np.uint8)).resize(
                        (size, size), Image.BILINEAR
                    ),
                    dtype=np.float32,
                )
                / 255.0
                for c in range(3)
            ]
        )
        att = np.array([0.35, 0.85, 0.65], dtype=np.float32)[:, None, None]
        veil = np.array([0.35, 0.75, 0.70], dtype=np.float32)[:, None, None]
        img = planes * att * 0.55 + veil * 0.45
        img += rng.normal(0, 0.01, img.shape).astype(np.float32)
        frames.append(np.clip(img, 0.0, 1.0))
    return frames


def write_frame(arr: np.ndarray, path) -> None:
    levels = np.clip(np.floor(arr * 255.0 + 0.5), 0, 255).astype(np.uint8)
    Image.fromarray(levels.transpose(1, 2, 0)).save(path)


def run_toolkit(*args: str) -> subprocess.CompletedProcess:
    """Invoke the restoration toolkit's CLI, the handoff boundary."""
    return subprocess.run(
        ["uwrestore", *args], capture_output=True, text=True, check=True
    )


@pytest.fixture(scope="session")
def frames_dir(tmp_path_factory):
    """Sixteen 64x64 degraded frames on disk."""
    root = tmp_path_factory.mktemp("frames")
    for i, arr in enumerate(synth_frames(16)):
        write_frame(arr, root / f"frame_{i:02d}.png")
    return root


@pytest.fixture(scope="session")
def pairs_root(frames_dir, tmp_path_factory):
    """A/B training pairs exported by the toolkit CLI."""
    out = tmp_path_factory.mktemp("pairs") / "set"
    run_toolkit(
        "export-pairs",
        str(frames_dir / "*.png"),
        "--k", "1.5",
        "--noise-ratio", "0.01",
        "--size", "64",
        "--out", str(out),
    )
    return out


@pytest.fixture(scope="session")
def smoke_run(pairs_root, tmp_path_factory):
    """Twenty-epoch toy training run; returns (summary, run_dir, seconds)."""
    import time

    out = tmp_path_factory.mktemp("smoke_run")
    cfg = TrainConfig(
        resolution=64,
        epochs_total=20,
        underwater_start_epoch=10,
        disc_preset="toy",
        seed=1,
    )
    start = time.perf_counter()
    summary = train(pairs_root, cfg, out)
    elapsed = time.perf_counter() - start
    return summary, out, elapsed


@pytest.fixture(scope="session")
def stair_run(pairs_root, tmp_path_factory):
    """Forty-epoch toy run with the index term staged in at epoch 30."""
    out = tmp_path_factory.mktemp("stair_run")
    cfg = TrainConfig(
        resolution=64,
        epochs_total=40,
        underwater_start_epoch=30,
        disc_preset="toy",
        seed=0,
    )
    summary = train(pairs_root, cfg, out)
    return summary, out
