"""Seeded multi-trial experiments and machine-readable reports.

Trial ``i`` of every cell runs with seed ``base_seed + i``, so cells do not
depend on execution order or on the worker count. Reports carry no
timestamps; the same experiment always writes the same bytes.
"""

from __future__ import annotations

import csv
import functools
import io
import json
import math
import os
import re
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

import numpy as np

from .baselines import run_gwo, run_pso, run_sca
from .benchmarks.classical import CLASSICAL, get_classical
from .benchmarks.composite import CF_LAYOUTS, make_cf
from .core import (
    Algorithm,
    ConfigurationError,
    Objective,
    Observer,
    RunConfig,
    RunResult,
    SearchSpace,
)
from .gego import run_gego
from .genetic import run_ga
from .geo import run_geo

RunFn = Callable[[RunConfig, Objective, SearchSpace, Optional[Observer]], RunResult]

ALGORITHMS: dict[Algorithm, RunFn] = {
    Algorithm.GEO: run_geo,
    Algorithm.GA: run_ga,
    Algorithm.GEGO: run_gego,
    Algorithm.PSO: run_pso,
    Algorithm.GWO: run_gwo,
    Algorithm.SCA: run_sca,
}

# composite experiments are normally run at this size
COMPOSITE_DIMS = 100
CSV_FIELDS = ("function", "algorithm", "mean", "std", "best", "worst", "trials", "seed")
REPORT_METADATA = {"std": "sample (n-1); 0 for a single trial", "trial_seed": "base_seed + trial index"}

_CF_NAME = re.compile(r"^cf(\d+)$")


class ReportError(OSError):
    """A report could not be written or read."""


def run_algorithm(
    config: RunConfig,
    objective: Objective,
    space: SearchSpace,
    observer: Optional[Observer] = None,
) -> RunResult:
    """Dispatch ``config`` to its optimizer."""
    return ALGORITHMS[config.algorithm](config, objective, space, observer)


def function_names() -> list[str]:
    return sorted(CLASSICAL) + [f"cf{k}" for k in sorted(CF_LAYOUTS)]


@functools.lru_cache(maxsize=64)
def resolve_function(
    name: str,
    dims: Optional[int] = None,
    data_dir: Optional[str] = None,
) -> tuple[Objective, SearchSpace, tuple]:
    """Look up a classical function or ``cf<k>``; returns ``(objective, space, notes)``.

    Results are cached, so a composition's data is loaded once per process.
    """
    match = _CF_NAME.match(name.lower())
    if match:
        k = int(match.group(1))
        if k not in CF_LAYOUTS:
            raise ConfigurationError(f"unknown composition {name!r}; have cf1..cf{max(CF_LAYOUTS)}")
        spec = make_cf(k, dims or COMPOSITE_DIMS, data_dir)
        return spec, spec.space(), tuple(spec.annotations)
    try:
        fn = get_classical(name)
    except KeyError:
        raise ConfigurationError(f"unknown function {name!r}; see `bench list`") from None
    # fixed-size functions keep their size whatever ``dims`` says
    return fn, fn.space(None if fn.fixed_dims else dims), ()


@dataclass(frozen=True)
class ExperimentSpec:
    algorithms: Sequence[str]
    functions: Sequence[str]
    dims: Optional[int] = None
    pop_size: int = 20
    max_iters: int = 100
    trials: int = 40
    base_seed: int = 0
    data_dir: Optional[str] = None

    def __post_init__(self):
        algos = tuple(Algorithm.parse(a).value for a in self.algorithms)
        object.__setattr__(self, "algorithms", algos)
        object.__setattr__(self, "functions", tuple(str(f).lower() for f in self.functions))
        if not algos or not self.functions:
            raise ConfigurationError("need at least one algorithm and one function")
        if int(self.trials) < 1:
            raise ConfigurationError(f"trials must be >= 1, got {self.trials}")
        if self.dims is not None and int(self.dims) < 1:
            raise ConfigurationError(f"dims must be >= 1, got {self.dims}")
        # fail early on bad sizes rather than inside every trial
        RunConfig(Algorithm.GEO, self.pop_size, self.max_iters, self.base_seed)
        RunConfig(Algorithm.GEO, self.pop_size, self.max_iters, self.base_seed + self.trials - 1)

    def trial_seed(self, i: int) -> int:
        return self.base_seed + i

    def to_dict(self) -> dict:
        d = asdict(self)
        d["algorithms"] = list(self.algorithms)
        d["functions"] = list(self.functions)
        return d


@dataclass
class SummaryCell:
    mean: float
    std: float
    best: float
    worst: float
    values: tuple = ()
    function: str = ""
    algorithm: str = ""
    seed: int = 0
    error: Optional[str] = None
    annotations: tuple = ()

    @property
    def trials(self) -> int:
        return len(self.values)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["values"] = list(self.values)
        d["annotations"] = list(self.annotations)
        d["trials"] = self.trials
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SummaryCell":
        d = dict(d)
        d.pop("trials", None)
        d["values"] = tuple(float(v) for v in d.get("values", ()))
        d["annotations"] = tuple(d.get("annotations", ()))
        return cls(**d)


def summarize(values: Sequence[float], **labels: Any) -> SummaryCell:
    """Mean, sample standard deviation, best and worst of ``values``."""
    vals = [float(v) for v in values]
    if not vals:
        raise ValueError("cannot summarize an empty sample")
    n = len(vals)
    best, worst = min(vals), max(vals)
    mean = math.fsum(vals) / n
    if math.isfinite(mean):
        # keep best <= mean <= worst under rounding
        mean = min(max(mean, best), worst)
        std = math.sqrt(math.fsum((v - mean) ** 2 for v in vals) / (n - 1)) if n > 1 else 0.0
    else:
        std = 0.0 if n == 1 else math.nan
    return SummaryCell(mean, std, best, worst, tuple(vals), **labels)


def _error_cell(message: str, **labels: Any) -> SummaryCell:
    nan = math.nan
    return SummaryCell(nan, nan, nan, nan, (), error=message, **labels)


def _run_trial(algorithm: str, function: str, dims, data_dir, pop, iters, seed) -> float:
    objective, space, _ = resolve_function(function, dims, data_dir)
    config = RunConfig(Algorithm.parse(algorithm), pop, iters, seed)
    return run_algorithm(config, objective, space).gbest_value


def _safe_trial(args: tuple) -> tuple[Optional[float], Optional[str]]:
    try:
        return _run_trial(*args), None
    except Exception as exc:  # one bad trial must not sink the experiment
        return None, f"{type(exc).__name__}: {exc}"


@dataclass
class ExperimentReport:
    spec: ExperimentSpec
    cells: list = field(default_factory=list)

    def cell(self, function: str, algorithm: str) -> SummaryCell:
        algorithm = Algorithm.parse(algorithm).value
        for c in self.cells:
            if c.function == function and c.algorithm == algorithm:
                return c
        raise KeyError((function, algorithm))

    def to_dict(self) -> dict:
        return {
            "metadata": dict(REPORT_METADATA),
            "spec": self.spec.to_dict(),
            "cells": [c.to_dict() for c in self.cells],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentReport":
        return cls(ExperimentSpec(**d["spec"]), [SummaryCell.from_dict(c) for c in d["cells"]])

    @property
    def failed(self) -> list[SummaryCell]:
        return [c for c in self.cells if c.error is not None]


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> ExperimentReport:
    """Run every (function, algorithm) cell for ``spec.trials`` seeded trials.

    With ``workers > 1`` trials go to a process pool; results are keyed by
    trial index, so the report does not depend on completion order. A
    function that cannot be built, or any failing trial, marks just that
    cell with an error.
    """
    cells: list[SummaryCell] = []
    jobs: list[tuple] = []
    layout: list[tuple[str, str, list[str], Optional[str]]] = []
    for function in spec.functions:
        try:
            _, _, notes = resolve_function(function, spec.dims, spec.data_dir)
            problem = None
        except Exception as exc:
            notes, problem = (), f"{type(exc).__name__}: {exc}"
        for algorithm in spec.algorithms:
            layout.append((function, algorithm, notes, problem))
            if problem is None:
                jobs.extend(
                    (algorithm, function, spec.dims, spec.data_dir, spec.pop_size,
                     spec.max_iters, spec.trial_seed(i))
                    for i in range(spec.trials)
                )
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_safe_trial, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        outcomes = [_safe_trial(job) for job in jobs]
    cursor = 0
    for function, algorithm, notes, problem in layout:
        labels = dict(function=function, algorithm=algorithm, seed=spec.base_seed,
                      annotations=tuple(notes))
        if problem is not None:
            cells.append(_error_cell(problem, **labels))
            continue
        chunk = outcomes[cursor:cursor + spec.trials]
        cursor += spec.trials
        errors = [err for _, err in chunk if err is not None]
        if errors:
            cells.append(_error_cell(errors[0], **labels))
        else:
            cells.append(summarize([v for v, _ in chunk], **labels))
    return ExperimentReport(spec, cells)


def _fmt(v: float) -> str:
    return repr(float(v))


def report_csv(report: ExperimentReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for c in report.cells:
        writer.writerow([c.function, c.algorithm, _fmt(c.mean), _fmt(c.std), _fmt(c.best),
                         _fmt(c.worst), c.trials, c.seed])
    return buf.getvalue()


def report_json(report: ExperimentReport) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"


def atomic_write_text(path: "str | Path", text: str) -> Path:
    """Write ``text`` to a sibling temp file, then rename it over ``path``."""
    path = Path(path)
    try:
        fd, tmp = tempfile.mkstemp(dir=path.parent if str(path.parent) else ".",
                                   prefix=f".{path.name}.", suffix=".tmp")
    except OSError as exc:
        raise ReportError(f"cannot write report {path}: {exc.strerror or exc}") from exc
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise ReportError(f"cannot write report {path}: {exc.strerror or exc}") from exc
    return path


def write_report(report: ExperimentReport, fmt: str, path: "str | Path") -> Path:
    fmt = fmt.lower()
    if fmt == "csv":
        text = report_csv(report)
    elif fmt == "json":
        text = report_json(report)
    else:
        raise ConfigurationError(f"unknown report format {fmt!r}; use csv or json")
    return atomic_write_text(path, text)


def read_report(path: "str | Path") -> ExperimentReport:
    """Parse a JSON report written by :func:`write_report`."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ReportError(f"cannot read report {path}: {exc.strerror or exc}") from exc
    return ExperimentReport.from_dict(data)


def trial_values(report: ExperimentReport) -> dict[tuple[str, str], np.ndarray]:
    return {(c.function, c.algorithm): np.asarray(c.values) for c in report.cells}
