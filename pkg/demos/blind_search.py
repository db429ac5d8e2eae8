"""
Recover an unknown blur strength without ground truth
=====================================================

Degrades a clean scene with a known blur, then pretends not to know the
strength and lets the fish-school search find filter parameters that
maximize the composite sharpness/contrast/color fitness.  Compares the
searched strength against the value that produced the blur.
"""

import numpy as np

from uwrestore import (
    ClaheConfig,
    DegradeParams,
    FilterParams,
    SwarmConfig,
    degrade,
    restoration_fitness,
    restore,
    search,
    underwater_index,
)
from uwrestore.scenes import recovery_scene
from uwrestore.swarm import ParamBounds

k_true = 1.5
scene = recovery_scene(seed=1, size=128)
degraded = degrade(
    scene,
    DegradeParams(k=k_true, attenuation=(0.55, 0.95, 0.8), noise_sigma=0.003, seed=5),
)

bounds = ParamBounds()
objective = restoration_fitness(degraded, bounds)

# fitness at the parameters that actually produced the degradation
truth_fitness = objective(np.array(bounds.encode(k_true, 0.01)))

result = search(objective, SwarmConfig(seed=0))
print(f"true k       {k_true:.3f}   fitness {truth_fitness:.4f}")
print(f"searched k   {result.params.k:.3f}   fitness {result.fitness:.4f}")
print(f"evaluations  {result.evaluations}")

# the trace is the running best per iteration, never decreasing
first, last = result.trace[0], result.trace[-1]
print(f"trace        {first:.4f} -> {last:.4f} over {len(result.trace) - 1} iterations")

restored = restore(degraded, result.params, ClaheConfig())
print(f"index        {underwater_index(degraded).value:.2f} -> "
      f"{underwater_index(restored).value:.2f}")
