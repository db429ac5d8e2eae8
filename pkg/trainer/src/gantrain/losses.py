"""Loss terms: least-squares adversarial, dark-channel, underwater index."""

from __future__ import annotations

from dataclasses import dataclass

import torch

from .config import TrainConfig

__all__ = [
    "lsgan_losses",
    "dark_channel_loss",
    "underwater_losses",
    "LossParts",
    "total_losses",
]


def _check_same_shape(*tensors: torch.Tensor) -> None:
    shapes = {tuple(t.shape) for t in tensors}
    if len(shapes) > 1:
        raise ValueError(f"shape mismatch: {sorted(shapes)}")


def lsgan_losses(real_map: torch.Tensor, fake_map: torch.Tensor):
    """Least-squares adversarial losses with labels 1 (real) and 0 (fake).

    Returns (discriminator_loss, generator_loss): the discriminator pulls
    real scores to 1 and fake scores to 0, the generator pulls fake
    scores to 1.
    """
    _check_same_shape(real_map, fake_map)
    d_loss = ((real_map - 1.0) ** 2).mean() + (fake_map**2).mean()
    g_loss = ((fake_map - 1.0) ** 2).mean()
    return d_loss, g_loss


def dark_channel_loss(target: torch.Tensor, candidate: torch.Tensor) -> torch.Tensor:
    """Mean absolute difference of per-pixel channel minima.

    Same-shape (N, 3, H, W) batches; the patch of the classic prior is
    collapsed to a single pixel, so the dark map is just the channel min.
    """
    _check_same_shape(target, candidate)
    if target.ndim != 4 or target.shape[1] != 3:
        raise ValueError(f"expected (N, 3, H, W) batches, got {tuple(target.shape)}")
    return (target.amin(dim=1) - candidate.amin(dim=1)).abs().mean()


def underwater_losses(
    real_map: torch.Tensor,
    fake_map: torch.Tensor,
    real_target: torch.Tensor,
    fake_target: torch.Tensor,
):
    """Index-branch losses in the least-squares sense.

    The discriminator regresses both maps onto their patch-index targets;
    the generator drives its fake map toward zero, the no-water ideal.
    Returns (discriminator_loss, generator_loss).
    """
    _check_same_shape(real_map, fake_map, real_target, fake_target)
    d_loss = ((real_map - real_target) ** 2).mean() + ((fake_map - fake_target) ** 2).mean()
    g_loss = (fake_map**2).mean()
    return d_loss, g_loss


@dataclass(frozen=True)
class LossParts:
    """Unweighted loss components of one update step."""

    d_adversarial: object
    g_adversarial: object
    dark_channel: object
    d_underwater: object
    g_underwater: object


def total_losses(parts: LossParts, cfg: TrainConfig, epoch: int):
    """Weighted discriminator and generator objectives for one epoch.

    The generator's underwater term joins at cfg.underwater_start_epoch;
    before that the objective is the adversarial term plus the
    dark-channel term only.  The discriminator always trains both
    branches.
    """
    d_total = cfg.w_adversarial * parts.d_adversarial
    g_total = cfg.w_adversarial * parts.g_adversarial + cfg.w_dark_channel * parts.dark_channel
    # weight zero skips its term entirely so no graph edge reaches the
    # index branch, not even a zero-gradient one
    if cfg.w_underwater != 0:
        d_total = d_total + cfg.w_underwater * parts.d_underwater
        if epoch >= cfg.underwater_start_epoch:
            g_total = g_total + cfg.w_underwater * parts.g_underwater
    return d_total, g_total
