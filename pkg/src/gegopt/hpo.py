"""Hyperparameter search for a small dense network.

A candidate is a 10-vector: ``(neurons, dropout)`` code pairs for up to four
hidden layers, then a batch-size code and ``log10`` of the learning rate.
:func:`decode_config` turns it into an :class:`AnnConfig`; a fitness adapter
scores the config, lower being better. Two adapters ship:

* ``"surrogate"``: a cheap deterministic bowl with a known optimum.
* ``"exec:<command>"``: a long-running trainer process spoken to over
  newline-delimited JSON on its stdin/stdout.
"""

from __future__ import annotations

import json
import logging
import math
import queue
import shlex
import subprocess
import threading
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .core import (
    Algorithm,
    ConfigurationError,
    DimensionError,
    Evaluator,
    RngStream,
    RunConfig,
    SearchSpace,
)
from .harness import SummaryCell, atomic_write_text, run_algorithm, summarize

log = logging.getLogger(__name__)

N_LAYERS = 4
OUTPUT_CLASSES = 10
LAYER_RANGES = ((128, 512), (64, 512), (32, 512), (16, 512))
DROPOUTS = (0.0, 0.1, 0.5)
BATCH_SIZES = (32, 64, 96, 128, 160, 192, 224, 256)
LR_LOG_RANGE = (-4.0, -2.0)
HPO_DIMS = 2 * N_LAYERS + 2

# Layer 1 codes start at its minimum; deeper layers start at 0 so a code
# below OUTPUT_CLASSES, and with it layer truncation, is reachable.
_NEURON_CODE_LOW = (128.0, 0.0, 0.0, 0.0)
_NEURON_CODE_HIGH = 513.0

HPO_SPACE = SearchSpace(
    np.array([v for lo in _NEURON_CODE_LOW for v in (lo, 0.0)] + [0.0, LR_LOG_RANGE[0]]),
    np.array([v for _ in range(N_LAYERS) for v in (_NEURON_CODE_HIGH, 3.0)]
             + [float(len(BATCH_SIZES)), LR_LOG_RANGE[1]]),
)


# Optimizers search this cube; it maps affinely onto HPO_SPACE. Code ranges
# differ by two orders of magnitude, and a direction-based move would
# otherwise pin the narrow codes to their bounds.
UNIT_SPACE = SearchSpace.box(0.0, 1.0, HPO_DIMS)


def from_unit(u: np.ndarray) -> np.ndarray:
    return HPO_SPACE.lower + np.asarray(u, dtype=float) * HPO_SPACE.width


class ExternalFitnessError(RuntimeError):
    """The external trainer could not be started."""


@dataclass(frozen=True)
class AnnConfig:
    layers: tuple  # ((neurons, dropout), ...)
    batch_size: int
    learning_rate: float

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple((int(n), float(d)) for n, d in self.layers))

    @property
    def total_neurons(self) -> int:
        return sum(n for n, _ in self.layers)

    @property
    def mean_dropout(self) -> float:
        return math.fsum(d for _, d in self.layers) / len(self.layers)

    def violations(self) -> list[str]:
        """Broken invariants, empty for a valid config."""
        out = []
        if not 1 <= len(self.layers) <= N_LAYERS:
            out.append(f"{len(self.layers)} layers")
        for i, (n, d) in enumerate(self.layers[:N_LAYERS]):
            lo, hi = LAYER_RANGES[i]
            if not lo <= n <= hi:
                out.append(f"layer {i + 1} neurons {n} outside [{lo}, {hi}]")
            if n < OUTPUT_CLASSES:
                out.append(f"layer {i + 1} narrower than the output layer")
            if d not in DROPOUTS:
                out.append(f"layer {i + 1} dropout {d}")
        if self.batch_size not in BATCH_SIZES:
            out.append(f"batch size {self.batch_size}")
        if not 1e-4 <= self.learning_rate <= 1e-2:
            out.append(f"learning rate {self.learning_rate}")
        return out

    def to_dict(self) -> dict:
        return {
            "layers": [{"neurons": n, "dropout": d} for n, d in self.layers],
            "batch_size": self.batch_size,
            "learning_rate": self.learning_rate,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AnnConfig":
        return cls(tuple((l["neurons"], l["dropout"]) for l in d["layers"]),
                   int(d["batch_size"]), float(d["learning_rate"]))


def _index(code: float, size: int) -> int:
    return min(max(math.floor(code), 0), size - 1)


def decode_config(v: Sequence[float]) -> AnnConfig:
    """Floor-decode a 10-vector into an :class:`AnnConfig`.

    Out-of-box components are clamped first. A layer whose floored neuron
    code is below the output width drops out together with every layer
    after it; surviving neuron counts are then clamped to their layer range.
    """
    v = np.asarray(v, dtype=float)
    if v.shape != (HPO_DIMS,):
        raise DimensionError(f"an HPO vector has {HPO_DIMS} components, got shape {v.shape}")
    v = np.minimum(np.maximum(v, HPO_SPACE.lower), HPO_SPACE.upper)
    layers = []
    for l in range(N_LAYERS):
        raw = math.floor(v[2 * l])
        if raw < OUTPUT_CLASSES:
            break
        lo, hi = LAYER_RANGES[l]
        layers.append((min(max(raw, lo), hi), DROPOUTS[_index(v[2 * l + 1], len(DROPOUTS))]))
    batch = BATCH_SIZES[_index(v[8], len(BATCH_SIZES))]
    lr = min(max(10.0 ** float(v[9]), 1e-4), 1e-2)
    return AnnConfig(tuple(layers), batch, lr)


# Surrogate bowl. The optimum is reachable: e.g. layers 512 and 128, both with
# dropout 0.1, batch 128, learning rate 1e-3.
SURROGATE_MIN = -0.98
SURROGATE_TARGET = {"total_neurons": 640, "learning_rate": 1e-3, "batch_size": 128, "dropout": 0.1}
SURROGATE_WEIGHTS = {"neurons": 0.02, "learning_rate": 0.05, "batch_size": 0.01, "dropout": 0.5}
SURROGATE_OPTIMUM = AnnConfig(((512, 0.1), (128, 0.1)), 128, 1e-3)


def surrogate_fitness(config: AnnConfig) -> float:
    """Negative accuracy stand-in: ``SURROGATE_MIN`` plus a quadratic in log features."""
    t, w = SURROGATE_TARGET, SURROGATE_WEIGHTS
    terms = (
        w["neurons"] * (math.log2(config.total_neurons) - math.log2(t["total_neurons"])) ** 2,
        w["learning_rate"] * (math.log10(config.learning_rate) - math.log10(t["learning_rate"])) ** 2,
        w["batch_size"] * (math.log2(config.batch_size) - math.log2(t["batch_size"])) ** 2,
        w["dropout"] * (config.mean_dropout - t["dropout"]) ** 2,
    )
    return SURROGATE_MIN + math.fsum(terms)


class ExternalFitness:
    """Score configs with a trainer process over a JSON line protocol.

    Request: ``{"id": n, "config": {...}}``; reply: ``{"id": n, "fitness": f}``.
    One request is in flight at a time. A timeout, a malformed line, a wrong
    id or a dead process scores ``+inf`` and adds a note to ``annotations``.
    Late replies to timed-out requests are skipped by id.
    """

    def __init__(self, command: Union[str, Sequence[str]], timeout: float = 600.0):
        self.command = command
        self.timeout = float(timeout)
        self.annotations: list[str] = []
        self.requests = 0
        self._last_id = 0
        self._lock = threading.Lock()
        argv = shlex.split(command) if isinstance(command, str) else list(command)
        if not argv:
            raise ExternalFitnessError("empty trainer command")
        try:
            self._proc = subprocess.Popen(
                argv, stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True, bufsize=1
            )
        except OSError as exc:
            raise ExternalFitnessError(f"cannot launch {command!r}: {exc}") from exc
        self._lines: "queue.Queue[Optional[str]]" = queue.Queue()
        self._reader = threading.Thread(target=self._pump, daemon=True)
        self._reader.start()
        self._dead = False

    def _pump(self) -> None:
        for line in self._proc.stdout:
            self._lines.put(line)
        self._lines.put(None)

    def _fail(self, note: str) -> float:
        self.annotations.append(note)
        log.warning("external fitness: %s", note)
        return math.inf

    def __call__(self, config: AnnConfig) -> float:
        with self._lock:
            self._last_id += 1
            rid = self._last_id
            if self._dead:
                return self._fail(f"request {rid}: trainer process has exited")
            request = json.dumps({"id": rid, "config": config.to_dict()})
            try:
                self._proc.stdin.write(request + "\n")
                self._proc.stdin.flush()
            except (BrokenPipeError, OSError, ValueError):
                self._dead = True
                return self._fail(f"request {rid}: cannot write to trainer process")
            self.requests += 1
            deadline = time.monotonic() + self.timeout
            while True:
                try:
                    line = self._lines.get(timeout=max(0.0, deadline - time.monotonic()))
                except queue.Empty:
                    return self._fail(f"request {rid}: no reply within {self.timeout:g} s")
                if line is None:
                    self._dead = True
                    return self._fail(f"request {rid}: trainer process exited")
                try:
                    reply = json.loads(line)
                    reply_id = reply["id"]
                    fitness = float(reply["fitness"])
                except (ValueError, KeyError, TypeError):
                    return self._fail(f"request {rid}: malformed reply {line.strip()[:200]!r}")
                if isinstance(reply_id, int) and reply_id < rid:
                    continue  # answer to an earlier, timed-out request
                if reply_id != rid:
                    return self._fail(f"request {rid}: reply carries id {reply_id!r}")
                return fitness

    def close(self, wait: float = 5.0) -> None:
        """Send the shutdown message and reap the process."""
        proc = self._proc
        if proc.poll() is None:
            try:
                proc.stdin.write(json.dumps({"cmd": "shutdown"}) + "\n")
                proc.stdin.flush()
            except (BrokenPipeError, OSError, ValueError):
                pass
        try:
            proc.stdin.close()
        except (BrokenPipeError, OSError):
            pass
        try:
            proc.wait(timeout=wait)
        except subprocess.TimeoutExpired:
            proc.kill()
            proc.wait()
        self._dead = True

    def __enter__(self) -> "ExternalFitness":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def external_fitness(config: AnnConfig, endpoint: ExternalFitness) -> float:
    return endpoint(config)


Adapter = Callable[[AnnConfig], float]


def make_adapter(spec: Union[str, Adapter], timeout: float = 600.0) -> tuple[Adapter, str]:
    """Resolve ``"surrogate"``, ``"exec:<command>"`` or a callable to ``(adapter, label)``."""
    if callable(spec):
        return spec, getattr(spec, "__name__", "custom")
    if spec == "surrogate":
        return surrogate_fitness, "surrogate"
    if isinstance(spec, str) and spec.startswith("exec:"):
        command = spec[len("exec:"):].strip()
        return ExternalFitness(command, timeout), spec
    raise ConfigurationError(f"unknown adapter {spec!r}; use 'surrogate' or 'exec:<command>'")


@dataclass
class HpoTrial:
    seed: int
    best_fitness: float
    best_vector: np.ndarray
    config: AnnConfig
    evaluations: int

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "best_fitness": self.best_fitness,
            "best_vector": [float(v) for v in self.best_vector],
            "config": self.config.to_dict(),
            "evaluations": self.evaluations,
        }


@dataclass
class HpoReport:
    algorithm: str
    adapter: str
    pop_size: int
    iters: int
    seed: int
    trials: list = field(default_factory=list)
    summary: Optional[SummaryCell] = None
    annotations: list = field(default_factory=list)

    @property
    def best_values(self) -> np.ndarray:
        return np.array([t.best_fitness for t in self.trials])

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "adapter": self.adapter,
            "pop_size": self.pop_size,
            "iters": self.iters,
            "seed": self.seed,
            "summary": self.summary.to_dict() if self.summary else None,
            "trials": [t.to_dict() for t in self.trials],
            "annotations": list(self.annotations),
        }

    def write(self, path) -> None:
        atomic_write_text(path, json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")


def hpo_objective(adapter: Adapter, unit: bool = False) -> Callable[[np.ndarray], float]:
    """``adapter . decode_config`` over encoding vectors, or over the unit cube."""
    if unit:
        return lambda u: adapter(decode_config(from_unit(u)))
    return lambda v: adapter(decode_config(v))


def run_hpo(
    algorithm: "str | Algorithm",
    adapter: Union[str, Adapter] = "surrogate",
    pop_size: int = 10,
    iters: int = 15,
    trials: int = 10,
    seed: int = 0,
    params=None,
    timeout: float = 600.0,
) -> HpoReport:
    """Tune the network config with ``algorithm``; trial ``i`` uses ``seed + i``.

    The optimizer runs on :data:`UNIT_SPACE`; reported vectors are in
    encoding units.
    """
    algo = Algorithm.parse(algorithm)
    if trials < 1:
        raise ConfigurationError(f"trials must be >= 1, got {trials}")
    fitness, label = make_adapter(adapter, timeout)
    report = HpoReport(algo.value, label, pop_size, iters, seed)
    objective = hpo_objective(fitness, unit=True)
    try:
        for i in range(trials):
            config = RunConfig(algo, pop_size, iters, seed + i, params)
            result = run_algorithm(config, objective, UNIT_SPACE)
            best = from_unit(result.gbest_position)
            report.trials.append(HpoTrial(seed + i, result.gbest_value, best,
                                          decode_config(best), result.evaluations))
    finally:
        if isinstance(fitness, ExternalFitness):
            fitness.close()
            report.annotations.extend(fitness.annotations)
    report.summary = summarize(report.best_values, function="hpo", algorithm=algo.value, seed=seed)
    return report


def random_search(adapter: Union[str, Adapter], budget: int, seed: int = 0) -> HpoTrial:
    """Best of ``budget`` uniform samples of the encoding box."""
    if budget < 1:
        raise ConfigurationError(f"budget must be >= 1, got {budget}")
    fitness, _ = make_adapter(adapter)
    evaluate = Evaluator(hpo_objective(fitness))
    try:
        samples = RngStream(seed).init.uniform(HPO_SPACE.lower, HPO_SPACE.upper,
                                               size=(budget, HPO_DIMS))
        values = np.array([evaluate(x) for x in samples])
    finally:
        if isinstance(fitness, ExternalFitness):
            fitness.close()
    best = int(np.argmin(values))
    return HpoTrial(seed, float(values[best]), samples[best],
                    decode_config(samples[best]), evaluate.count)
