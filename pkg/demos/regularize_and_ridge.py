"""From a raw imprecise terrain to its fuzzy ridge.

Fuzzy boundaries need a regular terrain, so most raw inputs go through the
regularization sweep first.  The sweep reports one proxy per imprecise
minimum; the ridge is then the union of the uncertain parts of the proxy
watersheds.
"""

import numpy as np

from impreciseflow import (
    NonRegularTerrainError,
    fuzzy_boundary_area,
    fuzzy_ridge,
    is_regular,
    persistent_watershed,
    potential_watershed,
    regularize_sweep,
    regularized_terrain,
)
from impreciseflow.fixtures import random_grid, spurious_pit, two_basin_grid

t, ids = spurious_pit()
rep = regularize_sweep(t)
print("spurious pit: low =", t.low.tolist())
print("  proxies", rep.proxies, "minima", [m.ids.tolist() for m in rep.minima])
print("  sweep realization M =", rep.M.tolist(), " regular before:", is_regular(t))
print("  regular after lifting:", is_regular(regularized_terrain(t)))
print()

t, ids = two_basin_grid()
rows, cols = t.grid_shape
print("two basins on a 7 x 5 grid, pits at", ids)
ridge = fuzzy_ridge(t)
for r in range(rows):
    line = ""
    for c in range(cols):
        v = r * cols + c
        line += "P " if v in ids.values() else ("# " if v in ridge else ". ")
    print("  " + line)
for name, q in ids.items():
    a = fuzzy_boundary_area(t, [q])
    print(f"  {name}: PoWS {len(potential_watershed(t, [q]).members)} "
          f"PsWS {len(persistent_watershed(t, [q]))} uncertain {len(a)}")
print()

rng = np.random.default_rng(3)
raw = random_grid(rng, (8, 8))
try:
    fuzzy_ridge(raw)
except NonRegularTerrainError as err:
    print("random 8 x 8 grid is not regular:", len(err.minima), "offending minima")
t = regularized_terrain(raw)
print("after regularization:", len(regularize_sweep(t).proxies), "minima,",
      len(fuzzy_ridge(t)), "ridge cells")
