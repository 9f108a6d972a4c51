"""Run a small experiment grid and write CSV and JSON reports.

Trial i of every cell uses seed base_seed + i, so the files are identical
from run to run and independent of the worker count.
"""

import tempfile
from pathlib import Path

from gegopt.harness import ExperimentSpec, read_report, run_experiment, write_report

spec = ExperimentSpec(["gego", "pso", "gwo", "sca"], ["ackley01", "matyas"],
                      pop_size=20, max_iters=100, trials=8, base_seed=42)
report = run_experiment(spec)

out = Path(tempfile.mkdtemp())
csv_path = write_report(report, "csv", out / "results.csv")
json_path = write_report(report, "json", out / "results.json")
print(csv_path.read_text())

again = read_report(json_path)
print("JSON roundtrip equal:", again.cells == report.cells)
print("per-trial values for gego/ackley01:", again.cell("ackley01", "gego").values[:3], "...")
