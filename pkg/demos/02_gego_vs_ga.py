"""Compare GEGO with its two parents on a handful of classical functions.

Each cell is the mean best value over 10 seeded trials at population 20 and
100 iterations.
"""

from gegopt.harness import ExperimentSpec, run_experiment

functions = ["beale", "levy13", "griewank", "qing", "michalewicz", "eggholder"]
spec = ExperimentSpec(["gego", "geo", "ga"], functions, pop_size=20, max_iters=100, trials=10)
report = run_experiment(spec)

print(f"{'function':<12}" + "".join(f"{a:>14}" for a in spec.algorithms))
for name in functions:
    row = [report.cell(name, a).mean for a in spec.algorithms]
    print(f"{name:<12}" + "".join(f"{v:>14.4e}" for v in row))
