import shutil

import pytest
import torch

from gantrain import (
    Generator,
    init_weights,
    load_frame,
    load_generator,
    restore_tensor,
    save_frame,
)
from gantrain.cli import main


def _fresh_generator(seed: int = 0) -> Generator:
    torch.manual_seed(seed)
    net = Generator()
    init_weights(net)
    net.eval()
    return net


class TestRestoreTensor:
    @pytest.mark.parametrize("shape", [(3, 64, 64), (3, 50, 70), (3, 33, 41)])
    def test_round_trips_any_frame_shape(self, shape):
        net = _fresh_generator()
        frame = torch.rand(*shape)
        out = restore_tensor(net, frame)
        assert out.shape == frame.shape
        assert torch.isfinite(out).all()
        assert out.min().item() >= 0.0
        assert out.max().item() <= 1.0

    def test_untrained_generator_output_is_finite(self):
        net = _fresh_generator(seed=9)
        out = restore_tensor(net, torch.rand(3, 64, 64))
        assert torch.isfinite(out).all()

    def test_inference_is_deterministic(self):
        net = _fresh_generator(seed=4)
        frame = torch.rand(3, 48, 48)
        first = restore_tensor(net, frame)
        second = restore_tensor(net, frame)
        assert torch.equal(first, second)


class TestCheckpointRoundTrip:
    def test_loaded_generator_matches_trained_one(self, smoke_run, frames_dir):
        _, run_dir, _ = smoke_run
        net = load_generator(run_dir / "checkpoints" / "final.pt")
        frame = load_frame(sorted(frames_dir.glob("*.png"))[0])
        out = restore_tensor(net, frame)
        assert out.shape == frame.shape
        assert torch.isfinite(out).all()


class TestFrameIO:
    def test_save_and_load_round_trip(self, tmp_path):
        frame = torch.rand(3, 20, 24)
        path = tmp_path / "frame.png"
        save_frame(frame, path)
        back = load_frame(path)
        assert back.shape == frame.shape
        # 8-bit storage: half-step quantization error at most.
        assert (back - frame).abs().max().item() <= 0.5 / 255 + 1e-6


class TestCli:
    def test_train_then_infer_round_trip(self, pairs_root, frames_dir, tmp_path):
        # Tiny two-pair copy keeps the end-to-end path fast.
        small = tmp_path / "pairs"
        for side in ("A", "B"):
            (small / side).mkdir(parents=True)
            for name in ("frame_00.png", "frame_01.png"):
                shutil.copy(pairs_root / side / name, small / side / name)

        cfg = tmp_path / "run.yaml"
        cfg.write_text("underwater_start_epoch: 0\n")
        run_dir = tmp_path / "run"
        code = main([
            "train", str(small),
            "--config", str(cfg),
            "--out", str(run_dir),
            "--epochs", "1",
            "--seed", "2",
            "--resolution", "64",
            "--disc-preset", "toy",
        ])
        assert code == 0
        assert (run_dir / "losses.json").exists()

        restored = tmp_path / "restored"
        code = main([
            "infer", str(frames_dir / "frame_00.png"),
            "--checkpoint", str(run_dir / "checkpoints" / "final.pt"),
            "--out", str(restored),
        ])
        assert code == 0
        assert (restored / "frame_00.png").exists()

    def test_bad_config_exits_with_usage_code(self, pairs_root, tmp_path):
        cfg = tmp_path / "bad.yaml"
        cfg.write_text("warmup_epochs: 3\n")
        code = main([
            "train", str(pairs_root),
            "--out", str(tmp_path / "run"),
            "--config", str(cfg),
        ])
        assert code == 2

    def test_missing_checkpoint_exits_with_usage_code(self, frames_dir, tmp_path):
        code = main([
            "infer", str(frames_dir / "frame_00.png"),
            "--checkpoint", str(tmp_path / "absent.pt"),
            "--out", str(tmp_path / "restored"),
        ])
        assert code == 2
