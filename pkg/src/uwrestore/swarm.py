"""Artificial fish school search over the normalized parameter square.

Positions live in [0, 1]^2 and decode through log-space bounds to the
filter parameters (k, noise_ratio).  Each iteration every fish acts on a
snapshot of the school (synchronous update):

  * the current best fish probes greedily and moves only to strictly
    better positions, so its fitness never decreases;
  * every other fish tries, in order: following the best better neighbor
    in visual range, moving toward an uncrowded neighborhood center with
    higher fitness, random preying probes accepted on first improvement,
    and finally a bounded random wander.

The best position ever evaluated is tracked separately, so the recorded
trace is non-decreasing by construction.  A fixed seed reproduces the
whole run bit for bit.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .restore import FilterParams

__all__ = ["ParamBounds", "SwarmConfig", "SearchResult", "search"]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ParamBounds:
    """Log-space search bounds for the filter parameters."""

    k_min: float = 1e-2
    k_max: float = 10.0
    noise_min: float = 1e-5
    noise_max: float = 1.0

    def __post_init__(self) -> None:
        if not (0 < self.k_min < self.k_max):
            raise ValueError(f"need 0 < k_min < k_max, got {self.k_min}, {self.k_max}")
        if not (0 < self.noise_min < self.noise_max):
            raise ValueError(
                f"need 0 < noise_min < noise_max, got {self.noise_min}, {self.noise_max}"
            )

    def decode(self, x: float, y: float) -> tuple[float, float]:
        """Map a normalized (x, y) in [0, 1]^2 to (k, noise_ratio)."""
        k = self.k_min * (self.k_max / self.k_min) ** float(x)
        r = self.noise_min * (self.noise_max / self.noise_min) ** float(y)
        return k, r

    def encode(self, k: float, noise_ratio: float) -> tuple[float, float]:
        """Inverse of decode; values are clamped into the bounds first."""
        k = min(max(k, self.k_min), self.k_max)
        r = min(max(noise_ratio, self.noise_min), self.noise_max)
        x = math.log(k / self.k_min) / math.log(self.k_max / self.k_min)
        y = math.log(r / self.noise_min) / math.log(self.noise_max / self.noise_min)
        return x, y


@dataclass(frozen=True)
class SwarmConfig:
    population: int = 20
    visual: float = 0.5
    step: float = 0.15
    crowding: float = 0.618
    tries: int = 5
    iterations: int = 30
    seed: int = 0
    bounds: ParamBounds = field(default_factory=ParamBounds)

    def __post_init__(self) -> None:
        if self.population < 1:
            raise ValueError(f"population must be >= 1, got {self.population}")
        if not (0.0 < self.step <= self.visual <= 1.0):
            raise ValueError(
                f"need 0 < step <= visual <= 1, got step={self.step} visual={self.visual}"
            )
        if not (0.0 < self.crowding <= 1.0):
            raise ValueError(f"crowding must be in (0, 1], got {self.crowding}")
        if self.tries < 1:
            raise ValueError(f"tries must be >= 1, got {self.tries}")
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")


@dataclass
class SearchResult:
    params: FilterParams
    position: tuple[float, float]
    fitness: float
    trace: list[float]
    evaluations: int


def search(fitness_fn, cfg: SwarmConfig = SwarmConfig()) -> SearchResult:
    """Run the school for cfg.iterations and return the best-ever position.

    fitness_fn maps a length-2 position array in [0, 1]^2 to a float; a
    non-finite return value rejects that candidate and the run continues.
    """
    rng = np.random.default_rng(cfg.seed)
    n = cfg.population
    state = _EvalCounter(fitness_fn)

    pos = rng.random((n, 2))
    fit = np.array([state(p) for p in pos])

    best_i = int(np.argmax(fit))
    best_pos = pos[best_i].copy()
    best_fit = float(fit[best_i])
    trace = [best_fit]

    for _ in range(cfg.iterations):
        snap_pos = pos.copy()
        snap_fit = fit.copy()
        leader = int(np.argmax(snap_fit))

        for i in range(n):
            if i == leader:
                new_p, new_f = _prey(state, rng, snap_pos[i], snap_fit[i], cfg.visual, cfg.tries)
                if new_f > snap_fit[i]:
                    pos[i], fit[i] = new_p, new_f
                continue

            here = snap_pos[i]
            dists = np.linalg.norm(snap_pos - here, axis=1)
            neighbor = (dists <= cfg.visual) & (np.arange(n) != i)

            moved = False
            better = neighbor & (snap_fit > snap_fit[i])
            if better.any():
                # Follow the best better fish in sight (ties: lowest index).
                j = int(np.argmax(np.where(better, snap_fit, -np.inf)))
                pos[i] = _step_toward(here, snap_pos[j], cfg.step)
                fit[i] = state(pos[i])
                moved = True
            elif neighbor.any():
                count = int(neighbor.sum())
                center = snap_pos[neighbor].mean(axis=0)
                if count / n < cfg.crowding:
                    center_fit = state(center)
                    if center_fit > snap_fit[i]:
                        pos[i] = _step_toward(here, center, cfg.step)
                        fit[i] = state(pos[i])
                        moved = True

            if not moved:
                new_p, new_f = _prey(state, rng, here, snap_fit[i], cfg.visual, cfg.tries)
                if new_f > snap_fit[i]:
                    pos[i], fit[i] = new_p, new_f
                else:
                    pos[i] = np.clip(here + rng.uniform(-cfg.step, cfg.step, 2), 0.0, 1.0)
                    fit[i] = state(pos[i])

        it_best = int(np.argmax(fit))
        if fit[it_best] > best_fit:
            best_fit = float(fit[it_best])
            best_pos = pos[it_best].copy()
        trace.append(best_fit)

    k, noise_ratio = cfg.bounds.decode(best_pos[0], best_pos[1])
    return SearchResult(
        params=FilterParams(k=k, noise_ratio=noise_ratio),
        position=(float(best_pos[0]), float(best_pos[1])),
        fitness=best_fit,
        trace=trace,
        evaluations=state.count,
    )


class _EvalCounter:
    """Wraps the objective: counts calls, maps non-finite scores to -inf."""

    def __init__(self, fn):
        self.fn = fn
        self.count = 0

    def __call__(self, position: np.ndarray) -> float:
        self.count += 1
        value = float(self.fn(position))
        if not math.isfinite(value):
            log.warning("non-finite fitness at position %s; candidate rejected", position)
            return -math.inf
        return value


def _step_toward(origin: np.ndarray, target: np.ndarray, step: float) -> np.ndarray:
    delta = target - origin
    dist = float(np.linalg.norm(delta))
    if dist <= step or dist == 0.0:
        return np.clip(target.copy(), 0.0, 1.0)
    return np.clip(origin + delta * (step / dist), 0.0, 1.0)


def _prey(state, rng, origin: np.ndarray, current_fit: float, visual: float, tries: int):
    """Random probes inside the visual box; first improvement wins."""
    for _ in range(tries):
        cand = np.clip(origin + rng.uniform(-visual, visual, 2), 0.0, 1.0)
        cand_fit = state(cand)
        if cand_fit > current_fit:
            return cand, cand_fit
    return origin, current_fit
