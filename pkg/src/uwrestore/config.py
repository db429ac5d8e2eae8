"""Pipeline configuration: defaults, YAML file loading, flag overrides.

Precedence is flags > file > defaults.  The file is YAML with one section
per stage; unknown sections or keys are rejected so typos fail loudly
instead of silently running with defaults.

    filter:  {k, noise_ratio}
    fitness: {sharpness, contrast, color_spread}
    swarm:   {population, visual, step, crowding, tries, iterations, seed,
              bounds: {k_min, k_max, noise_min, noise_max}}
    clahe:   {tiles_x, tiles_y, clip_limit, enabled}
    io:      {inputs, out}
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Any, Mapping

import yaml

from .clahe import ClaheConfig
from .fitness import FitnessWeights
from .restore import FilterParams
from .swarm import ParamBounds, SwarmConfig

__all__ = ["IoConfig", "PipelineConfig", "load_config_file", "build_config"]


@dataclass(frozen=True)
class IoConfig:
    """Default input patterns and output destination."""

    inputs: tuple[str, ...] = ()
    out: str | None = None


@dataclass(frozen=True)
class PipelineConfig:
    filter_params: FilterParams = field(default_factory=FilterParams)
    weights: FitnessWeights = field(default_factory=FitnessWeights)
    swarm: SwarmConfig = field(default_factory=SwarmConfig)
    clahe: ClaheConfig = field(default_factory=ClaheConfig)
    io: IoConfig = field(default_factory=IoConfig)


_SECTION_FIELDS = {
    "filter": ("k", "noise_ratio"),
    "fitness": ("sharpness", "contrast", "color_spread"),
    "swarm": ("population", "visual", "step", "crowding", "tries", "iterations", "seed", "bounds"),
    "clahe": ("tiles_x", "tiles_y", "clip_limit", "enabled"),
    "io": ("inputs", "out"),
}
_BOUNDS_FIELDS = ("k_min", "k_max", "noise_min", "noise_max")


def _check_keys(section: str, data: Mapping[str, Any], allowed: tuple[str, ...]) -> None:
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise ValueError(f"unknown key(s) in config section {section!r}: {', '.join(unknown)}")


def load_config_file(path: str | os.PathLike) -> dict[str, dict[str, Any]]:
    """Parse and validate a YAML config file into plain section dicts."""
    with open(path, encoding="utf-8") as fh:
        raw = yaml.safe_load(fh)
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise ValueError(f"config root must be a mapping, got {type(raw).__name__}")
    _check_keys("<root>", raw, tuple(_SECTION_FIELDS))
    out: dict[str, dict[str, Any]] = {}
    for name, body in raw.items():
        if body is None:
            body = {}
        if not isinstance(body, dict):
            raise ValueError(f"config section {name!r} must be a mapping")
        _check_keys(name, body, _SECTION_FIELDS[name])
        if name == "swarm" and isinstance(body.get("bounds"), dict):
            _check_keys("swarm.bounds", body["bounds"], _BOUNDS_FIELDS)
        out[name] = dict(body)
    return out


def _merged(base: Mapping[str, Any] | None, override: Mapping[str, Any] | None) -> dict:
    out = dict(base or {})
    for key, value in (override or {}).items():
        if value is not None:
            out[key] = value
    return out


def build_config(
    file_sections: Mapping[str, Mapping[str, Any]] | None = None,
    overrides: Mapping[str, Mapping[str, Any]] | None = None,
) -> PipelineConfig:
    """Assemble the config: dataclass defaults, then file, then overrides.

    Overrides use the same section/key names as the file; None values in
    the overrides mean "no opinion" and never mask file values.
    """
    file_sections = file_sections or {}
    overrides = overrides or {}
    sec = {
        name: _merged(file_sections.get(name), overrides.get(name)) for name in _SECTION_FIELDS
    }
    bounds_raw = sec["swarm"].pop("bounds", None)
    swarm_kwargs = dict(sec["swarm"])
    if bounds_raw is not None:
        swarm_kwargs["bounds"] = ParamBounds(**bounds_raw)
    io_raw = dict(sec["io"])
    if "inputs" in io_raw and io_raw["inputs"] is not None:
        io_raw["inputs"] = tuple(io_raw["inputs"])
    return PipelineConfig(
        filter_params=FilterParams(**sec["filter"]),
        weights=FitnessWeights(**sec["fitness"]),
        swarm=SwarmConfig(**swarm_kwargs),
        clahe=ClaheConfig(**sec["clahe"]),
        io=IoConfig(**io_raw),
    )
