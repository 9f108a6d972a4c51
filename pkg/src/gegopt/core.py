"""Population machinery shared by every optimizer in the package.

An optimizer run works on a list of :class:`Agent` objects inside a box
(:class:`SearchSpace`). All randomness comes from an :class:`RngStream`, which
hands out independent named sub-streams so that, for example, the genetic
phase of GEGO never perturbs the movement draws of the eagles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Iterable, Optional, Sequence

import numpy as np

Objective = Callable[[np.ndarray], float]
Observer = Callable[[int, Sequence["Agent"]], None]

#: ``‖A‖`` and ``|a_k|`` below this are treated as zero.
ZERO_TOL = 1e-12


class ConfigurationError(ValueError):
    """Invalid search space, run configuration or parameter record."""


class DimensionError(ValueError):
    """Vector lengths do not agree with each other or with the search space."""


class Algorithm(str, Enum):
    GEO = "geo"
    GA = "ga"
    GEGO = "gego"
    PSO = "pso"
    GWO = "gwo"
    SCA = "sca"

    @classmethod
    def parse(cls, name: "str | Algorithm") -> "Algorithm":
        if isinstance(name, Algorithm):
            return name
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise ConfigurationError(f"unknown algorithm {name!r}") from None


@dataclass(frozen=True)
class SearchSpace:
    """Axis-aligned feasible box ``[lower, upper]``."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float)).copy()
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float)).copy()
        if lower.ndim != 1 or lower.shape != upper.shape or lower.size == 0:
            raise ConfigurationError(
                f"bounds must be equal-length 1-D vectors, got {lower.shape} and {upper.shape}"
            )
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ConfigurationError("bounds must be finite")
        if np.any(lower >= upper):
            bad = int(np.flatnonzero(lower >= upper)[0])
            raise ConfigurationError(
                f"lower[{bad}]={lower[bad]} is not below upper[{bad}]={upper[bad]}"
            )
        lower.flags.writeable = False
        upper.flags.writeable = False
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def box(cls, low: float, high: float, dims: int) -> "SearchSpace":
        if dims < 1:
            raise ConfigurationError("dims must be positive")
        return cls(np.full(dims, float(low)), np.full(dims, float(high)))

    @property
    def dims(self) -> int:
        return self.lower.size

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, x: np.ndarray) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))


@dataclass
class Agent:
    """One candidate solution plus its personal-best memory."""

    position: np.ndarray
    fitness: float = math.inf
    best_position: np.ndarray = None  # type: ignore[assignment]
    best_fitness: float = math.inf

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=float)
        if self.best_position is None:
            self.best_position = self.position.copy()
        else:
            self.best_position = np.asarray(self.best_position, dtype=float)

    def copy(self) -> "Agent":
        return Agent(self.position.copy(), self.fitness, self.best_position.copy(), self.best_fitness)


@dataclass
class RunConfig:
    """Algorithm identity plus every tunable of a run.

    ``params`` is the per-algorithm record (``GeoParams``, ``GaParams``,
    ``GegoParams``, ``PsoParams``, ``GwoParams`` or ``ScaParams``); ``None``
    selects the defaults of the chosen algorithm.
    """

    algorithm: Algorithm
    pop_size: int = 20
    max_iters: int = 100
    seed: int = 0
    params: Any = None

    def __post_init__(self):
        self.algorithm = Algorithm.parse(self.algorithm)
        if int(self.pop_size) < 2:
            raise ConfigurationError(f"pop_size must be >= 2, got {self.pop_size}")
        if int(self.max_iters) < 1:
            raise ConfigurationError(f"max_iters must be >= 1, got {self.max_iters}")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigurationError("seed must be an unsigned 64-bit integer")
        self.pop_size = int(self.pop_size)
        self.max_iters = int(self.max_iters)
        self.seed = int(self.seed)


@dataclass
class RunResult:
    gbest_value: float
    gbest_position: np.ndarray
    history: np.ndarray
    evaluations: int


class RngStream:
    """Seed-derived random source with independent named sub-streams.

    Each name maps to a fixed child of one ``numpy.random.SeedSequence``, so
    the streams are statistically independent and advancing one never shifts
    the draws of another.
    """

    NAMES = ("init", "movement", "genetic")

    def __init__(self, seed: int):
        if not 0 <= int(seed) < 2**64:
            raise ConfigurationError("seed must be an unsigned 64-bit integer")
        self.seed = int(seed)
        children = np.random.SeedSequence(self.seed).spawn(len(self.NAMES))
        self._streams = {
            name: np.random.Generator(np.random.PCG64(child))
            for name, child in zip(self.NAMES, children)
        }

    def __getitem__(self, name: str) -> np.random.Generator:
        try:
            return self._streams[name]
        except KeyError:
            raise KeyError(f"no sub-stream named {name!r}; have {self.NAMES}") from None

    @property
    def init(self) -> np.random.Generator:
        return self._streams["init"]

    @property
    def movement(self) -> np.random.Generator:
        return self._streams["movement"]

    @property
    def genetic(self) -> np.random.Generator:
        return self._streams["genetic"]


class Evaluator:
    """Counts objective calls and maps non-finite values to ``+inf``."""

    def __init__(self, objective: Objective):
        self.objective = objective
        self.count = 0

    def __call__(self, x: np.ndarray) -> float:
        self.count += 1
        value = float(self.objective(x))
        return value if math.isfinite(value) else math.inf


def clamp(position: np.ndarray, space: SearchSpace) -> np.ndarray:
    position = np.asarray(position, dtype=float)
    if position.shape != (space.dims,):
        raise DimensionError(f"position has shape {position.shape}, space has {space.dims} dims")
    return np.minimum(np.maximum(position, space.lower), space.upper)


def init_population(space: SearchSpace, n: int, rng: RngStream) -> list[Agent]:
    """Sample ``n`` agents uniformly in the box, using the ``init`` stream.

    Fitness fields stay at ``+inf`` until the caller evaluates them.
    """
    if n < 2:
        raise ConfigurationError(f"population needs at least 2 agents, got {n}")
    positions = rng.init.uniform(space.lower, space.upper, size=(n, space.dims))
    # uniform() is half-open but rounding can still land on upper; keep it exact
    positions = np.clip(positions, space.lower, space.upper)
    return [Agent(p) for p in positions]


def update_memory(agent: Agent, new_position: np.ndarray, new_fitness: float) -> Agent:
    """Move ``agent`` and accept the point into memory when it ties or improves.

    Non-finite fitness counts as ``+inf`` and never enters memory.
    """
    new_fitness = float(new_fitness)
    if not math.isfinite(new_fitness):
        new_fitness = math.inf
    agent.position = np.asarray(new_position, dtype=float)
    agent.fitness = new_fitness
    if new_fitness <= agent.best_fitness and new_fitness < math.inf:
        agent.best_position = agent.position.copy()
        agent.best_fitness = new_fitness
    return agent


def evaluate_population(population: Iterable[Agent], evaluate: Evaluator) -> None:
    """Evaluate every agent in index order and seed its memory."""
    for agent in population:
        fitness = evaluate(agent.position)
        agent.fitness = fitness
        agent.best_position = agent.position.copy()
        agent.best_fitness = fitness


def select_gbest(population: Sequence[Agent]) -> tuple[float, np.ndarray]:
    """Lowest memory value; ties go to the lowest index."""
    if len(population) == 0:
        raise ValueError("cannot select a global best from an empty population")
    best = 0
    for i in range(1, len(population)):
        if population[i].best_fitness < population[best].best_fitness:
            best = i
    return population[best].best_fitness, population[best].best_position.copy()


def positions(population: Sequence[Agent]) -> np.ndarray:
    return np.array([a.position for a in population])


def best_positions(population: Sequence[Agent]) -> np.ndarray:
    return np.array([a.best_position for a in population])


def best_fitnesses(population: Sequence[Agent]) -> np.ndarray:
    return np.array([a.best_fitness for a in population])


@dataclass
class RunState:
    """Bookkeeping every run loop shares: history and the observer hook."""

    max_iters: int
    observer: Optional[Observer] = None
    history: list = field(default_factory=list)

    def record(self, t: int, population: Sequence[Agent]) -> None:
        self.history.append(select_gbest(population)[0])
        if self.observer is not None:
            self.observer(t, population)

    def result(self, population: Sequence[Agent], evaluate: Evaluator) -> RunResult:
        value, position = select_gbest(population)
        return RunResult(value, position, np.asarray(self.history, dtype=float), evaluate.count)


def check_algorithm(config: RunConfig, expected: Algorithm) -> None:
    if config.algorithm is not expected:
        raise ConfigurationError(
            f"config is for {config.algorithm.value}, not {expected.value}"
        )
