"""Follow one golden eagle flock on the Himmelblau function.

Himmelblau has four equal minima, so watching where the flock settles is a
quick way to see the attack/cruise balance at work: early on the cruise term
keeps eagles spread out, later the attack term pulls them onto the memories.
"""

import numpy as np

from gegopt import GeoParams, RunConfig, coefficients, run_geo
from gegopt.benchmarks.classical import get_classical

fn = get_classical("himmelblau")
space = fn.space()
T = 60

# The propensities move linearly between their endpoints.
for t in (0, T // 2, T):
    pa, pc = coefficients(t, T)
    print(f"t={t:>3}: attack {pa:.3f}  cruise {pc:.3f}")


def report(t, population):
    if t % 15 == 0:
        spread = np.ptp([a.position for a in population], axis=0).max()
        best = min(a.best_fitness for a in population)
        print(f"iter {t:>3}: best {best:.3e}  flock spread {spread:.3f}")


result = run_geo(RunConfig("geo", pop_size=20, max_iters=T, seed=1), fn, space, observer=report)
print("best point", np.round(result.gbest_position, 6), "value", result.gbest_value)
print("objective calls", result.evaluations)

# The literal unit-length step is available for comparison. On a box this
# small it works; on wide boxes it cannot cross the domain in time.
unit = run_geo(RunConfig("geo", 20, T, 1, GeoParams(step_scale="unit")), fn, space)
print("unit-step best value", unit.gbest_value)
