"""GEGO: golden eagle movement with a periodic whole-population genetic phase."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .core import (
    Agent,
    Algorithm,
    ConfigurationError,
    Evaluator,
    Objective,
    Observer,
    RngStream,
    RunConfig,
    RunResult,
    RunState,
    SearchSpace,
    check_algorithm,
    evaluate_population,
    init_population,
)
from .genetic import (
    Chromosome,
    Crossover,
    GaParams,
    decode,
    encode,
    mutate_bits,
    single_point_crossover,
)
from .geo import GeoParams, geo_iteration


@dataclass(frozen=True)
class GegoParams:
    geo: GeoParams = field(default_factory=GeoParams)
    genetic: GaParams = field(
        default_factory=lambda: GaParams(crossover=Crossover.SINGLE_POINT_BINARY)
    )
    frequency: int = 5

    def __post_init__(self):
        if int(self.frequency) < 1:
            raise ConfigurationError(f"frequency must be >= 1, got {self.frequency}")


def _offer(agent: Agent, child: np.ndarray, fitness: float) -> None:
    # position swaps on beating the parent's current point; memory only moves
    # on beating the parent's best, so memory never gets worse
    if fitness < agent.fitness:
        agent.position = child
        agent.fitness = fitness
        if fitness < agent.best_fitness:
            agent.best_position = child.copy()
            agent.best_fitness = fitness


def _try_child(agent: Agent, parent: Chromosome, child: Chromosome, evaluate: Evaluator) -> None:
    # a child with the parent's own bits is the parent, not its quantized copy
    if np.array_equal(child.bits, parent.bits):
        return
    x = decode(child)
    _offer(agent, x, evaluate(x))


def genetic_phase(
    population: Sequence[Agent],
    params: GaParams,
    evaluate: Evaluator,
    space: SearchSpace,
    rng: RngStream,
) -> Sequence[Agent]:
    """Encode every eagle, pair them at random, cross, mutate, decode, offer back.

    Uses only the ``genetic`` stream. Each pair shares one cut point over the
    concatenated chromosome; an unpaired eagle is mutated only. Elitism does
    not apply here. Children whose bits equal their parent's encoding are
    skipped, so the phase never swaps a point for its own quantization.
    """
    n = len(population)
    bits = params.bits_per_dim
    order = rng.genetic.permutation(n)
    for s in range(0, n - 1, 2):
        i, j = int(order[s]), int(order[s + 1])
        parent_i = encode(population[i].position, space, bits)
        parent_j = encode(population[j].position, space, bits)
        ci, cj = single_point_crossover(parent_i, parent_j, rng=rng)
        ci = mutate_bits(ci, params.mutation_rate, rng)
        cj = mutate_bits(cj, params.mutation_rate, rng)
        _try_child(population[i], parent_i, ci, evaluate)
        _try_child(population[j], parent_j, cj, evaluate)
    if n % 2 == 1:
        k = int(order[-1])
        chrom = encode(population[k].position, space, bits)
        _try_child(population[k], chrom, mutate_bits(chrom, params.mutation_rate, rng), evaluate)
    return population


def run_gego(
    config: RunConfig,
    objective: Objective,
    space: SearchSpace,
    observer: Optional[Observer] = None,
) -> RunResult:
    check_algorithm(config, Algorithm.GEGO)
    params = config.params if config.params is not None else GegoParams()
    rng = RngStream(config.seed)
    evaluate = Evaluator(objective)
    population = init_population(space, config.pop_size, rng)
    evaluate_population(population, evaluate)
    state = RunState(config.max_iters, observer)
    for t in range(1, config.max_iters + 1):
        if t % params.frequency == 0:
            genetic_phase(population, params.genetic, evaluate, space, rng)
        geo_iteration(population, t, config.max_iters, params.geo, evaluate, space, rng)
        state.record(t, population)
    return state.result(population, evaluate)
