"""Underwater image restoration toolkit.

Filtering-based restoration (turbulence-model deconvolution, channel
normalization, lightness equalization), a fish-school parameter search
driven by a no-reference fitness score, degradation synthesis, quality
metrics, and receptive-field geometry for the downstream trainer.
"""

from .clahe import ClaheConfig, clahe
from .config import IoConfig, PipelineConfig, build_config, load_config_file
from .degrade import DegradeParams, degrade
from .fitness import (
    FitnessScore,
    FitnessWeights,
    balance_indicator,
    contrast_indicator,
    fitness_score,
    haze_indicator,
    restoration_fitness,
)
from .image import (
    ImageBuf,
    channel_stats,
    histogram,
    lab_to_rgb,
    load_image,
    resize,
    rgb_to_lab,
    save_image,
    to_gray,
)
from .quality import (
    UnderwaterReport,
    background_light,
    dark_channel,
    entropy,
    mean_abs_laplacian,
    patch_underwater_map,
    underwater_index,
)
from .receptive import (
    ADVERSARIAL_BRANCH,
    ADVERSARIAL_CHAIN,
    STEM,
    UNDERWATER_BRANCH,
    UNDERWATER_CHAIN,
    LayerSpec,
    RfBox,
    map_size,
    preset_chain,
    rf_box,
    rf_chain,
    rf_size,
)
from .restore import (
    FilterParams,
    build_turbulence_otf,
    normalize_channels,
    restore,
    wiener_deconvolve,
)
from .swarm import ParamBounds, SearchResult, SwarmConfig, search

__version__ = "0.1.0"

__all__ = [
    "ClaheConfig",
    "clahe",
    "IoConfig",
    "PipelineConfig",
    "build_config",
    "load_config_file",
    "DegradeParams",
    "degrade",
    "FitnessScore",
    "FitnessWeights",
    "balance_indicator",
    "contrast_indicator",
    "fitness_score",
    "haze_indicator",
    "restoration_fitness",
    "ImageBuf",
    "channel_stats",
    "histogram",
    "lab_to_rgb",
    "load_image",
    "resize",
    "rgb_to_lab",
    "save_image",
    "to_gray",
    "UnderwaterReport",
    "background_light",
    "dark_channel",
    "entropy",
    "mean_abs_laplacian",
    "patch_underwater_map",
    "underwater_index",
    "ADVERSARIAL_BRANCH",
    "ADVERSARIAL_CHAIN",
    "STEM",
    "UNDERWATER_BRANCH",
    "UNDERWATER_CHAIN",
    "LayerSpec",
    "RfBox",
    "map_size",
    "preset_chain",
    "rf_box",
    "rf_chain",
    "rf_size",
    "FilterParams",
    "build_turbulence_otf",
    "normalize_channels",
    "restore",
    "wiener_deconvolve",
    "ParamBounds",
    "SearchResult",
    "SwarmConfig",
    "search",
    "__version__",
]
