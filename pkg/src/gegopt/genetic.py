"""Genetic operators and a standalone elitist GA.

Real vectors are mapped to fixed-point chromosomes (``bits_per_dim`` bits per
coordinate, most significant bit first, all coordinates concatenated) so that
bitwise single-point crossover and bit-flip mutation can act on them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .core import (
    Agent,
    Algorithm,
    ConfigurationError,
    DimensionError,
    Evaluator,
    Objective,
    Observer,
    RngStream,
    RunConfig,
    RunResult,
    RunState,
    SearchSpace,
    check_algorithm,
    clamp,
    evaluate_population,
    init_population,
)

DEFAULT_BITS = 16


class Crossover(str, Enum):
    SINGLE_POINT_BINARY = "single_point_binary"
    LINEAR_ARITHMETIC = "linear_arithmetic"


@dataclass(frozen=True)
class GaParams:
    elite_fraction: float = 0.05
    mutation_rate: float = 0.001
    crossover: Crossover = Crossover.LINEAR_ARITHMETIC
    bits_per_dim: int = DEFAULT_BITS

    def __post_init__(self):
        if not 0 <= self.elite_fraction < 1:
            raise ConfigurationError(f"elite_fraction must be in [0, 1), got {self.elite_fraction}")
        if not 0 <= self.mutation_rate <= 1:
            raise ConfigurationError(f"mutation_rate must be in [0, 1], got {self.mutation_rate}")
        if not 1 <= self.bits_per_dim <= 52:
            raise ConfigurationError("bits_per_dim must be in [1, 52]")
        object.__setattr__(self, "crossover", Crossover(self.crossover))


@dataclass
class Chromosome:
    bits: np.ndarray  # uint8 0/1, length bits_per_dim * dims
    space: SearchSpace
    bits_per_dim: int = DEFAULT_BITS

    def __post_init__(self):
        self.bits = np.asarray(self.bits, dtype=np.uint8)
        if self.bits.shape != (self.bits_per_dim * self.space.dims,):
            raise DimensionError(
                f"expected {self.bits_per_dim * self.space.dims} bits, got {self.bits.shape}"
            )

    def __len__(self) -> int:
        return self.bits.size

    def codes(self) -> np.ndarray:
        """Per-dimension integer codes."""
        weights = 1 << np.arange(self.bits_per_dim - 1, -1, -1, dtype=np.int64)
        return self.bits.reshape(self.space.dims, self.bits_per_dim).astype(np.int64) @ weights

    def with_bits(self, bits: np.ndarray) -> "Chromosome":
        return Chromosome(bits, self.space, self.bits_per_dim)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Chromosome):
            return NotImplemented
        return (self.bits_per_dim == other.bits_per_dim
                and np.array_equal(self.bits, other.bits)
                and np.array_equal(self.space.lower, other.space.lower)
                and np.array_equal(self.space.upper, other.space.upper))


def encode(position: np.ndarray, space: SearchSpace, bits: int = DEFAULT_BITS) -> Chromosome:
    """Quantize ``position`` onto ``2**bits`` evenly spaced levels per dimension.

    Out-of-box inputs are clamped first.
    """
    x = clamp(position, space)
    levels = (1 << bits) - 1
    codes = np.rint((x - space.lower) / space.width * levels).astype(np.int64)
    codes = np.clip(codes, 0, levels)
    shifts = np.arange(bits - 1, -1, -1, dtype=np.int64)
    matrix = (codes[:, None] >> shifts[None, :]) & 1
    return Chromosome(matrix.astype(np.uint8).ravel(), space, bits)


def decode(chrom: Chromosome) -> np.ndarray:
    levels = (1 << chrom.bits_per_dim) - 1
    space = chrom.space
    x = space.lower + chrom.codes() / levels * space.width
    # lower + 1.0 * width may round one ulp past upper
    return np.minimum(np.maximum(x, space.lower), space.upper)


def single_point_crossover(
    p1: Chromosome,
    p2: Chromosome,
    k: Optional[int] = None,
    rng: Optional[RngStream] = None,
) -> tuple[Chromosome, Chromosome]:
    """Swap tails after cut ``k``: child1 = p1[:k] + p2[k:], child2 = p2[:k] + p1[k:].

    When ``k`` is omitted it is drawn uniformly from ``[1, L-1]`` on the
    genetic stream.
    """
    length = len(p1)
    if len(p2) != length:
        raise DimensionError(f"parents have {length} and {len(p2)} bits")
    if k is None:
        if rng is None:
            raise ValueError("either a cut index or an RngStream is required")
        k = int(rng.genetic.integers(1, length))
    if not 1 <= k <= length - 1:
        raise ValueError(f"cut index {k} outside [1, {length - 1}]")
    c1 = np.concatenate([p1.bits[:k], p2.bits[k:]])
    c2 = np.concatenate([p2.bits[:k], p1.bits[k:]])
    return p1.with_bits(c1), p2.with_bits(c2)


def linear_crossover(
    p1: np.ndarray,
    p2: np.ndarray,
    rng: Optional[RngStream] = None,
    space: Optional[SearchSpace] = None,
    alpha: Optional[float] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Convex blend with one shared ``alpha ~ U[0, 1]`` per pair."""
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    if p1.shape != p2.shape:
        raise DimensionError(f"parents have shapes {p1.shape} and {p2.shape}")
    if alpha is None:
        if rng is None:
            raise ValueError("either alpha or an RngStream is required")
        alpha = float(rng.genetic.random())
    c1 = alpha * p1 + (1.0 - alpha) * p2
    c2 = (1.0 - alpha) * p1 + alpha * p2
    if space is not None:
        c1, c2 = clamp(c1, space), clamp(c2, space)
    return c1, c2


def mutate_bits(chrom: Chromosome, rate: float, rng: RngStream) -> Chromosome:
    if not 0 <= rate <= 1:
        raise ValueError(f"mutation rate must be in [0, 1], got {rate}")
    flips = rng.genetic.random(len(chrom)) < rate
    return chrom.with_bits(chrom.bits ^ flips.astype(np.uint8))


def mutate_position(x: np.ndarray, space: SearchSpace, params: GaParams, rng: RngStream) -> np.ndarray:
    """Bit-flip mutation of a real vector through the codec.

    Quantization only happens when at least one bit actually flips; otherwise
    ``x`` comes back untouched.
    """
    chrom = encode(x, space, params.bits_per_dim)
    mutated = mutate_bits(chrom, params.mutation_rate, rng)
    if np.array_equal(mutated.bits, chrom.bits):
        return np.array(x, dtype=float)
    return decode(mutated)


def tournament_select(
    population: Sequence[Agent],
    rng: RngStream,
    draws: Optional[tuple[int, int]] = None,
) -> int:
    """Binary tournament on memory fitness; the first drawn wins ties."""
    n = len(population)
    if n < 2:
        raise ValueError("tournament selection needs at least 2 agents")
    if draws is None:
        i, j = (int(v) for v in rng.genetic.choice(n, size=2, replace=False))
    else:
        i, j = draws
    return j if population[j].best_fitness < population[i].best_fitness else i


def elite_count(elite_fraction: float, n: int) -> int:
    # float noise like 0.05 * 20 = 1.0000000000000002 must not add an elite
    return min(n, math.ceil(round(elite_fraction * n, 9)))


def _challenge(agent: Agent, child: np.ndarray, child_fitness: float) -> bool:
    """Offspring takes the parent's slot only if strictly fitter."""
    if child_fitness < agent.best_fitness:
        agent.position = np.asarray(child, dtype=float)
        agent.fitness = child_fitness
        agent.best_position = agent.position.copy()
        agent.best_fitness = child_fitness
        return True
    return False


def _breed(
    pa: np.ndarray,
    pb: np.ndarray,
    space: SearchSpace,
    params: GaParams,
    rng: RngStream,
) -> tuple[np.ndarray, np.ndarray]:
    if params.crossover is Crossover.LINEAR_ARITHMETIC:
        c1, c2 = linear_crossover(pa, pb, rng, space)
        return mutate_position(c1, space, params, rng), mutate_position(c2, space, params, rng)
    ca, cb = encode(pa, space, params.bits_per_dim), encode(pb, space, params.bits_per_dim)
    ca, cb = single_point_crossover(ca, cb, rng=rng)
    ca = mutate_bits(ca, params.mutation_rate, rng)
    cb = mutate_bits(cb, params.mutation_rate, rng)
    return decode(ca), decode(cb)


def ga_generation(
    population: list[Agent],
    params: GaParams,
    evaluate: Evaluator,
    space: SearchSpace,
    rng: RngStream,
) -> list[Agent]:
    """One generation: elites kept, every other slot challenged by offspring.

    Non-elite slots are shuffled and paired. Each pair slot receives two
    children bred from tournament winners; child ``i`` replaces the occupant
    of slot ``i`` only when strictly fitter. An unpaired slot gets a mutated
    copy of its own occupant as challenger.
    """
    n = len(population)
    order = sorted(range(n), key=lambda i: (population[i].best_fitness, i))
    pool = np.array(order[elite_count(params.elite_fraction, n):], dtype=int)
    pool = pool[rng.genetic.permutation(pool.size)]
    for s in range(0, pool.size - 1, 2):
        i, j = int(pool[s]), int(pool[s + 1])
        a = tournament_select(population, rng)
        b = tournament_select(population, rng)
        c1, c2 = _breed(population[a].best_position, population[b].best_position, space, params, rng)
        f1, f2 = evaluate(c1), evaluate(c2)
        _challenge(population[i], c1, f1)
        _challenge(population[j], c2, f2)
    if pool.size % 2 == 1:
        last = population[int(pool[-1])]
        child = mutate_position(last.best_position, space, params, rng)
        if not np.array_equal(child, last.best_position):
            _challenge(last, child, evaluate(child))
    return population


def run_ga(
    config: RunConfig,
    objective: Objective,
    space: SearchSpace,
    observer: Optional[Observer] = None,
) -> RunResult:
    check_algorithm(config, Algorithm.GA)
    params = config.params if config.params is not None else GaParams()
    rng = RngStream(config.seed)
    evaluate = Evaluator(objective)
    population = init_population(space, config.pop_size, rng)
    evaluate_population(population, evaluate)
    state = RunState(config.max_iters, observer)
    for t in range(1, config.max_iters + 1):
        ga_generation(population, params, evaluate, space, rng)
        state.record(t, population)
    return state.result(population, evaluate)
