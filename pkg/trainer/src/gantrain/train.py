"""Training loop: alternating updates, staged index loss, decay schedule."""

from __future__ import annotations

import json
import logging
import os
import time
from dataclasses import asdict
from pathlib import Path

import numpy as np
import torch
from torch.utils.data import DataLoader

from .config import TrainConfig
from .data import PairDataset
from .losses import LossParts, dark_channel_loss, lsgan_losses, total_losses, underwater_losses
from .nets import Discriminator, Generator, index_chain, init_weights
from .uwindex import patch_targets

__all__ = ["lr_factor", "train"]

log = logging.getLogger(__name__)


def lr_factor(epoch: int, cfg: TrainConfig) -> float:
    """Learning-rate multiplier for a 1-based epoch.

    Constant through decay_start_epoch, then linear toward zero one epoch
    past the end so the final epoch still moves.
    """
    if epoch <= cfg.decay_start_epoch:
        return 1.0
    span = cfg.epochs_total - cfg.decay_start_epoch + 1
    return 1.0 - (epoch - cfg.decay_start_epoch) / span


def _atomic_json(payload, path: Path) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, path)


def _atomic_save(payload, path: Path) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    torch.save(payload, tmp)
    os.replace(tmp, path)


def _batch_targets(batch: torch.Tensor, chain) -> torch.Tensor:
    """Clamped patch-index maps of a (N, 3, H, W) batch as (N, 1, g, g)."""
    maps = [
        patch_targets(frame.detach().cpu().numpy().astype(np.float64), chain)
        for frame in batch
    ]
    return torch.from_numpy(np.stack(maps)[:, None]).to(batch.dtype)


def train(pairs_root: str | Path, cfg: TrainConfig, out_dir: str | Path) -> dict:
    """Train the restoration generator against the dual-branch critic.

    Writes per-epoch loss records to out_dir/losses.json and checkpoints
    under out_dir/checkpoints/ (latest.pt each epoch, final.pt at the
    end), both atomically.  Returns the summary that was written.
    """
    out = Path(out_dir)
    ckpt_dir = out / "checkpoints"
    ckpt_dir.mkdir(parents=True, exist_ok=True)

    torch.manual_seed(cfg.seed)
    dataset = PairDataset(pairs_root)
    generator = Generator()
    discriminator = Discriminator(cfg.disc_in_channels, cfg.disc_preset)
    init_weights(generator)
    init_weights(discriminator)
    chain = index_chain(cfg.disc_preset)

    opt_g = torch.optim.Adam(
        generator.parameters(), lr=cfg.lr, betas=cfg.adam_betas, eps=cfg.adam_eps
    )
    opt_d = torch.optim.Adam(
        discriminator.parameters(), lr=cfg.lr, betas=cfg.adam_betas, eps=cfg.adam_eps
    )

    def disc_input(source: torch.Tensor, candidate: torch.Tensor) -> torch.Tensor:
        if cfg.disc_in_channels == 6:
            return torch.cat([source, candidate], dim=1)
        return candidate

    records: list[dict] = []
    start = time.perf_counter()
    for epoch in range(1, cfg.epochs_total + 1):
        factor = lr_factor(epoch, cfg)
        for group in opt_g.param_groups:
            group["lr"] = cfg.lr * factor
        for group in opt_d.param_groups:
            group["lr"] = cfg.lr * factor

        loader = DataLoader(
            dataset,
            batch_size=cfg.batch,
            shuffle=True,
            num_workers=0,
            generator=torch.Generator().manual_seed(cfg.seed * 100_000 + epoch),
        )
        sums = {key: 0.0 for key in (
            "d_adversarial", "g_adversarial", "dark_channel",
            "d_underwater", "g_underwater", "d_total", "g_total",
        )}
        steps = 0
        for source, target in loader:
            produced = generator(source)
            target_map = _batch_targets(target, chain)
            produced_map = _batch_targets(produced, chain)

            # critic update on detached output
            opt_d.zero_grad(set_to_none=True)
            adv_real, idx_real = discriminator(disc_input(source, target))
            adv_fake, idx_fake = discriminator(disc_input(source, produced.detach()))
            d_adv, _ = lsgan_losses(adv_real, adv_fake)
            d_idx, _ = underwater_losses(idx_real, idx_fake, target_map, produced_map)
            d_total, _ = total_losses(
                LossParts(d_adv, 0.0, 0.0, d_idx, 0.0), cfg, epoch
            )
            d_total.backward()
            opt_d.step()

            # generator update through the refreshed critic
            opt_g.zero_grad(set_to_none=True)
            adv_gen, idx_gen = discriminator(disc_input(source, produced))
            _, g_adv = lsgan_losses(adv_gen.detach(), adv_gen)
            dark = dark_channel_loss(target, produced)
            _, g_idx = underwater_losses(idx_gen.detach(), idx_gen, target_map, produced_map)
            _, g_total = total_losses(
                LossParts(0.0, g_adv, dark, 0.0, g_idx), cfg, epoch
            )
            g_total.backward()
            opt_g.step()

            active = epoch >= cfg.underwater_start_epoch
            sums["d_adversarial"] += float(d_adv.detach())
            sums["g_adversarial"] += float(g_adv.detach())
            sums["dark_channel"] += float(dark.detach())
            sums["d_underwater"] += float(d_idx.detach())
            sums["g_underwater"] += float(g_idx.detach()) if active else 0.0
            sums["d_total"] += float(d_total.detach())
            sums["g_total"] += float(g_total.detach())
            steps += 1

        record = {
            "epoch": epoch,
            "lr": cfg.lr * factor,
            "steps": steps,
            **{key: val / steps for key, val in sums.items()},
        }
        records.append(record)
        log.info(
            "epoch %d/%d: d %.4f g %.4f (adv %.4f dark %.4f underwater %.4f)",
            epoch, cfg.epochs_total, record["d_total"], record["g_total"],
            record["g_adversarial"], record["dark_channel"], record["g_underwater"],
        )
        _atomic_json({"schema_version": 1, "config": _config_dict(cfg), "epochs": records},
                     out / "losses.json")
        state = {
            "epoch": epoch,
            "config": _config_dict(cfg),
            "generator": generator.state_dict(),
            "discriminator": discriminator.state_dict(),
            "opt_g": opt_g.state_dict(),
            "opt_d": opt_d.state_dict(),
        }
        _atomic_save(state, ckpt_dir / "latest.pt")

    _atomic_save(state, ckpt_dir / "final.pt")
    elapsed = time.perf_counter() - start
    log.info("trained %d epochs in %.1f s", cfg.epochs_total, elapsed)
    return {"schema_version": 1, "config": _config_dict(cfg), "epochs": records}


def _config_dict(cfg: TrainConfig) -> dict:
    doc = asdict(cfg)
    doc["adam_betas"] = list(doc["adam_betas"])
    return doc
