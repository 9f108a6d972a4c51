"""Comparison optimizers: PSO, GWO and SCA in their canonical forms.

Update rules:

* PSO (Kennedy & Eberhart 1995, inertia form of Shi & Eberhart 1998):
  ``v = w*v + c1*r1*(pbest - x) + c2*r2*(gbest - x)``; ``x = x + v``.
* GWO (Mirjalili et al. 2014): three leaders alpha/beta/delta,
  ``X_l = leader - A*|C*leader - x|`` with ``A = 2a*r1 - a``, ``C = 2*r2``,
  new ``x`` is the mean of the three; ``a`` falls linearly from 2 to 0.
* SCA (Mirjalili 2016): ``x + r1*sin(r2)*|r3*P - x|`` or the cosine twin,
  picked by ``r4 < 0.5``; ``r1`` decays linearly from ``a`` to 0.

``r*`` draws are per dimension. Every algorithm clamps positions to the box
and keeps the shared personal-best memory, so the best-so-far history is
non-increasing.
"""

from __future__ import annotations

from dataclasses import dataclass
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
    clamp,
    evaluate_population,
    init_population,
    select_gbest,
    update_memory,
)


@dataclass(frozen=True)
class PsoParams:
    w: float = 0.8
    c1: float = 0.5
    c2: float = 0.5


@dataclass(frozen=True)
class GwoParams:
    a_start: float = 2.0
    a_end: float = 0.0
    leaders: int = 3

    def __post_init__(self):
        if self.leaders != 3:
            raise ConfigurationError("GWO uses exactly three leaders")


@dataclass(frozen=True)
class ScaParams:
    linear_component: float = 2.0


def _start(config: RunConfig, objective: Objective, space: SearchSpace):
    rng = RngStream(config.seed)
    evaluate = Evaluator(objective)
    population = init_population(space, config.pop_size, rng)
    evaluate_population(population, evaluate)
    return rng, evaluate, population


def pso_step(
    population: Sequence[Agent],
    velocities: np.ndarray,
    params: PsoParams,
    evaluate: Evaluator,
    space: SearchSpace,
    rng: RngStream,
) -> None:
    """Synchronous PSO update; ``velocities`` is modified in place."""
    _, gbest = select_gbest(population)
    gen = rng.movement
    dims = space.dims
    for i, agent in enumerate(population):
        r1 = gen.random(dims)
        r2 = gen.random(dims)
        velocities[i] = (params.w * velocities[i]
                         + params.c1 * r1 * (agent.best_position - agent.position)
                         + params.c2 * r2 * (gbest - agent.position))
    for i, agent in enumerate(population):
        new_pos = clamp(agent.position + velocities[i], space)
        update_memory(agent, new_pos, evaluate(new_pos))


def run_pso(
    config: RunConfig,
    objective: Objective,
    space: SearchSpace,
    observer: Optional[Observer] = None,
) -> RunResult:
    check_algorithm(config, Algorithm.PSO)
    params = config.params if config.params is not None else PsoParams()
    rng, evaluate, population = _start(config, objective, space)
    velocities = np.zeros((config.pop_size, space.dims))
    state = RunState(config.max_iters, observer)
    for t in range(1, config.max_iters + 1):
        pso_step(population, velocities, params, evaluate, space, rng)
        state.record(t, population)
    return state.result(population, evaluate)


def gwo_leaders(population: Sequence[Agent]) -> list[np.ndarray]:
    order = sorted(range(len(population)), key=lambda i: (population[i].best_fitness, i))
    # populations smaller than three reuse the best wolves
    picks = [order[min(k, len(order) - 1)] for k in range(3)]
    return [population[i].best_position.copy() for i in picks]


def gwo_step(
    population: Sequence[Agent],
    a: float,
    evaluate: Evaluator,
    space: SearchSpace,
    rng: RngStream,
) -> None:
    leaders = gwo_leaders(population)
    gen = rng.movement
    dims = space.dims
    proposals = []
    for agent in population:
        x = agent.position
        guided = np.zeros(dims)
        for leader in leaders:
            A = 2.0 * a * gen.random(dims) - a
            C = 2.0 * gen.random(dims)
            guided += leader - A * np.abs(C * leader - x)
        proposals.append(clamp(guided / 3.0, space))
    for agent, new_pos in zip(population, proposals):
        update_memory(agent, new_pos, evaluate(new_pos))


def run_gwo(
    config: RunConfig,
    objective: Objective,
    space: SearchSpace,
    observer: Optional[Observer] = None,
) -> RunResult:
    check_algorithm(config, Algorithm.GWO)
    params = config.params if config.params is not None else GwoParams()
    rng, evaluate, population = _start(config, objective, space)
    state = RunState(config.max_iters, observer)
    T = config.max_iters
    for t in range(1, T + 1):
        # a sweeps a_start -> a_end across iterations 0..T-1
        a = params.a_start - (t - 1) * (params.a_start - params.a_end) / T
        gwo_step(population, a, evaluate, space, rng)
        state.record(t, population)
    return state.result(population, evaluate)


def sca_step(
    population: Sequence[Agent],
    amplitude: float,
    evaluate: Evaluator,
    space: SearchSpace,
    rng: RngStream,
) -> None:
    _, destination = select_gbest(population)
    gen = rng.movement
    dims = space.dims
    proposals = []
    for agent in population:
        x = agent.position
        r2 = 2.0 * np.pi * gen.random(dims)
        r3 = 2.0 * gen.random(dims)
        r4 = gen.random(dims)
        wave = np.where(r4 < 0.5, np.sin(r2), np.cos(r2))
        proposals.append(clamp(x + amplitude * wave * np.abs(r3 * destination - x), space))
    for agent, new_pos in zip(population, proposals):
        update_memory(agent, new_pos, evaluate(new_pos))


def run_sca(
    config: RunConfig,
    objective: Objective,
    space: SearchSpace,
    observer: Optional[Observer] = None,
) -> RunResult:
    check_algorithm(config, Algorithm.SCA)
    params = config.params if config.params is not None else ScaParams()
    rng, evaluate, population = _start(config, objective, space)
    state = RunState(config.max_iters, observer)
    T = config.max_iters
    for t in range(1, T + 1):
        amplitude = params.linear_component - (t - 1) * params.linear_component / T
        sca_step(population, amplitude, evaluate, space, rng)
        state.record(t, population)
    return state.result(population, evaluate)
