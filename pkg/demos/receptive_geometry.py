"""
Receptive-field geometry for the two discriminator branches
===========================================================

Walks the adversarial and underwater conv chains, printing how the
receptive field grows layer by layer and where the corner cells of the
final map actually look in a 512x512 input.
"""

from uwrestore import (
    ADVERSARIAL_BRANCH,
    UNDERWATER_BRANCH,
    UNDERWATER_CHAIN,
    map_size,
    rf_box,
    rf_chain,
    rf_size,
)

stem = UNDERWATER_CHAIN[0]

for label, branch in (("adversarial", ADVERSARIAL_BRANCH), ("underwater", UNDERWATER_BRANCH)):
    chain = (stem,) + tuple(branch)
    # rf_chain[i] = extent of one final-map cell seen in map i's coordinates,
    # so index 0 is the full field in input pixels
    sizes = rf_chain(chain)
    maps = map_size(chain, 512)
    print(f"{label} branch")
    print(f"  branch-only field {rf_size(branch)} px, with stem {sizes[0]} px")
    print(f"  field per map     {sizes}")
    print(f"  map sizes at 512  {maps}")

# where the 6x6 underwater map's corner and center cells look
print("underwater map cells -> input boxes (512 input)")
for cell in ((0, 0), (3, 3), (5, 5)):
    box = rf_box(UNDERWATER_CHAIN, cell, 512)
    print(f"  cell {cell}  x [{box.x_min}, {box.x_max}]  y [{box.y_min}, {box.y_max}]")
