"""Composition functions: blend weights and a short optimization.

Without official shift data, shifts come from a seeded generator and the
rotations are the identity; the spec object carries a note saying so.
"""

import numpy as np

from gegopt import RunConfig, run_gego, run_geo
from gegopt.benchmarks.composite import composite_weights, make_cf

cf = make_cf(3, dims=10)
print(cf.name, "f* =", cf.f_star, "|", cf.annotations[0])

# Standing on a component's shift puts all weight on that component.
print("weights at shift 2:", composite_weights(cf, cf.shifts[2]))
print("value at shift 0:", cf(cf.shifts[0]))

# Halfway between two shifts the weights blend.
mid = 0.5 * (cf.shifts[0] + cf.shifts[1])
print("weights halfway:", np.round(composite_weights(cf, mid), 4))

for runner, name in ((run_geo, "geo"), (run_gego, "gego")):
    vals = [runner(RunConfig(name, 20, 100, s), cf, cf.space()).gbest_value for s in range(5)]
    print(f"{name:>5}: mean best {np.mean(vals):.2f} over 5 trials")
