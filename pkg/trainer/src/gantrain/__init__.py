"""Adversarial trainer for underwater image restoration.

Learns a feed-forward restoration generator from (degraded, restored)
pairs exported by the filtering toolkit, judged by a dual-branch patch
discriminator: one branch scores realism, the other regresses a
per-patch underwater index whose generator-side term joins the objective
on a staged schedule.
"""

from .config import TrainConfig, load_config
from .data import PairDataset, load_frame, save_frame
from .infer import load_generator, restore_frames, restore_tensor
from .losses import (
    LossParts,
    dark_channel_loss,
    lsgan_losses,
    total_losses,
    underwater_losses,
)
from .nets import Discriminator, Generator, ResidualBlock, index_chain, init_weights
from .train import lr_factor, train
from .uwindex import (
    DISPERSION_FLOOR,
    FULL_INDEX_CHAIN,
    TOY_INDEX_CHAIN,
    cell_box,
    grid_size,
    patch_index_map,
    patch_targets,
    rgb_to_lab_norm,
    underwater_index,
)

__all__ = [
    "TrainConfig",
    "load_config",
    "PairDataset",
    "load_frame",
    "save_frame",
    "load_generator",
    "restore_frames",
    "restore_tensor",
    "LossParts",
    "dark_channel_loss",
    "lsgan_losses",
    "total_losses",
    "underwater_losses",
    "Discriminator",
    "Generator",
    "ResidualBlock",
    "index_chain",
    "init_weights",
    "lr_factor",
    "train",
    "DISPERSION_FLOOR",
    "FULL_INDEX_CHAIN",
    "TOY_INDEX_CHAIN",
    "cell_box",
    "grid_size",
    "patch_index_map",
    "patch_targets",
    "rgb_to_lab_norm",
    "underwater_index",
]

__version__ = "0.1.0"
