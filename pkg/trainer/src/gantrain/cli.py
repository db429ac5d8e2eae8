"""Command line: train on exported pairs, infer with a checkpoint."""

from __future__ import annotations

import argparse
import glob
import logging
import sys
from pathlib import Path

from .config import load_config
from .infer import restore_frames
from .train import train

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2


def cmd_train(args) -> int:
    cfg = load_config(
        args.config,
        epochs_total=args.epochs,
        seed=args.seed,
        resolution=args.resolution,
        batch=args.batch,
        disc_preset=args.disc_preset,
    )
    train(args.pairs, cfg, args.out)
    return EXIT_OK


def cmd_infer(args) -> int:
    frames: list[Path] = []
    for pattern in args.frames:
        matches = sorted(glob.glob(pattern))
        frames.extend(Path(m) for m in matches) if matches else frames.append(Path(pattern))
    written = restore_frames(args.checkpoint, frames, args.out)
    print(f"wrote {len(written)} frame(s) -> {args.out}")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gantrain",
        description="Adversarial trainer for underwater restoration networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train on an exported A/B pair set")
    p.add_argument("pairs", help="pair directory (A/, B/, manifest.json)")
    p.add_argument("--config", help="YAML config file")
    p.add_argument("--out", required=True, help="run directory for logs and checkpoints")
    p.add_argument("--epochs", type=int, help="override epochs_total")
    p.add_argument("--seed", type=int, help="override the training seed")
    p.add_argument("--resolution", type=int, help="override the frame resolution")
    p.add_argument("--batch", type=int, help="override the batch size")
    p.add_argument("--disc-preset", choices=("full", "toy"), help="discriminator scale")
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("infer", help="restore frames with a trained checkpoint")
    p.add_argument("frames", nargs="+", help="input frames (paths or globs)")
    p.add_argument("--checkpoint", required=True, help="trained checkpoint file")
    p.add_argument("--config", help="unused for inference; accepted for symmetry")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(fn=cmd_infer)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError, KeyError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
