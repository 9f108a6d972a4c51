"""Drive an out-of-process trainer through the ``exec:`` adapter.

``toy_trainer.py`` stands in for a real training script. The same run is
available from the shell::

    bench hpo --algo gego --adapter "exec:python demos/toy_trainer.py" --trials 2
"""

import sys
from pathlib import Path

from gegopt.hpo import run_hpo

trainer = Path(__file__).with_name("toy_trainer.py")
report = run_hpo("gego", f"exec:{sys.executable} {trainer}", pop_size=6, iters=5, trials=2, seed=3)
for t in report.trials:
    print(f"seed {t.seed}: fitness {t.best_fitness:.4f} with {t.evaluations} evaluations")
    print("   ", t.config)
print("protocol notes:", report.annotations or "none")
