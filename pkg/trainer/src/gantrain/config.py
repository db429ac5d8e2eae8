"""Training configuration: optimizer settings, loss weights, schedule."""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

import yaml

__all__ = ["TrainConfig", "load_config"]


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters for the adversarial restoration trainer.

    The learning rate holds constant through `decay_start_epoch`, then
    falls linearly toward zero at the end of training.  The generator's
    underwater-index term joins the objective at `underwater_start_epoch`
    so the index branch of the discriminator trains first; both branch
    losses drive the discriminator from epoch 1.
    """

    lr: float = 2e-4
    adam_betas: tuple[float, float] = (0.5, 0.99)
    adam_eps: float = 1e-8
    batch: int = 2
    resolution: int = 512
    epochs_total: int = 60
    decay_start_epoch: int = 50
    underwater_start_epoch: int = 30
    w_adversarial: float = 1.0
    w_underwater: float = 10.0
    w_dark_channel: float = 30.0
    seed: int = 0
    # discriminator input channels: 6 judges (input, candidate) pairs,
    # 3 judges the candidate alone
    disc_in_channels: int = 6
    disc_preset: str = "full"

    def __post_init__(self):
        if self.lr <= 0:
            raise ValueError(f"lr must be positive, got {self.lr}")
        if len(self.adam_betas) != 2 or not all(0 <= b < 1 for b in self.adam_betas):
            raise ValueError(f"adam_betas must be two values in [0, 1), got {self.adam_betas}")
        if self.adam_eps <= 0:
            raise ValueError(f"adam_eps must be positive, got {self.adam_eps}")
        if self.batch < 1:
            raise ValueError(f"batch must be >= 1, got {self.batch}")
        if self.resolution < 8 or self.resolution % 4:
            raise ValueError(f"resolution must be a multiple of 4 and >= 8, got {self.resolution}")
        if self.epochs_total < 1:
            raise ValueError(f"epochs_total must be >= 1, got {self.epochs_total}")
        if self.decay_start_epoch < 1:
            raise ValueError(
                f"decay_start_epoch must be >= 1, got {self.decay_start_epoch}"
            )
        if not self.underwater_start_epoch < self.epochs_total:
            raise ValueError(
                "underwater_start_epoch must come before epochs_total, got "
                f"{self.underwater_start_epoch} vs {self.epochs_total}"
            )
        for name in ("w_adversarial", "w_underwater", "w_dark_channel"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        if self.disc_in_channels not in (3, 6):
            raise ValueError(
                f"disc_in_channels must be 3 (unconditional) or 6 (pair), got {self.disc_in_channels}"
            )
        if self.disc_preset not in ("full", "toy"):
            raise ValueError(f"disc_preset must be 'full' or 'toy', got {self.disc_preset}")


def load_config(path: str | Path | None, **overrides) -> TrainConfig:
    """Build a TrainConfig from a YAML file plus keyword overrides.

    Precedence: overrides > file > defaults.  Unknown keys in either
    source are rejected.  Overrides whose value is None are ignored so
    absent CLI flags do not mask file values.
    """
    values: dict = {}
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            doc = yaml.safe_load(fh) or {}
        if not isinstance(doc, dict):
            raise ValueError(f"config root must be a mapping, got {type(doc).__name__}")
        values.update(doc)
    for key, val in overrides.items():
        if val is not None:
            values[key] = val
    known = {f.name for f in fields(TrainConfig)}
    unknown = set(values) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    if "adam_betas" in values:
        values["adam_betas"] = tuple(values["adam_betas"])
    return TrainConfig(**values)
