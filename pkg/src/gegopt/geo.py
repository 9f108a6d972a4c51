"""Golden Eagle Optimization.

Every eagle picks a prey from the flock's memory, then moves by a blend of
an attack step (toward the prey) and a cruise step (perpendicular to it).
The attack weight grows and the cruise weight shrinks linearly over the run.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import (
    ZERO_TOL,
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
    update_memory,
)


STEP_SCALES = ("radius", "unit")


@dataclass(frozen=True)
class GeoParams:
    """Attack/cruise propensities at the first and last iteration.

    ``step_scale`` picks how long a move is. ``"unit"`` uses the unit attack
    and cruise directions as they are, so every step is at most
    ``pa + pc`` long whatever the box size. ``"radius"`` multiplies the step
    by the eagle-to-prey distance, which lets the flock cross wide boxes early
    and refine finely late.
    """

    pa0: float = 0.5
    paT: float = 2.0
    pc0: float = 1.0
    pcT: float = 0.5
    step_scale: str = "radius"

    def __post_init__(self):
        if self.step_scale not in STEP_SCALES:
            raise ConfigurationError(f"step_scale must be one of {STEP_SCALES}, got {self.step_scale!r}")


def attack_vector(eagle_pos: np.ndarray, prey_pos: np.ndarray) -> np.ndarray:
    eagle_pos = np.asarray(eagle_pos, dtype=float)
    prey_pos = np.asarray(prey_pos, dtype=float)
    if eagle_pos.shape != prey_pos.shape:
        raise DimensionError(f"eagle {eagle_pos.shape} and prey {prey_pos.shape} differ")
    return prey_pos - eagle_pos


def cruise_vector(attack: np.ndarray, rng: RngStream) -> np.ndarray:
    """Random direction ``C`` with ``A . C == 0``.

    A pivot index ``k`` is drawn among the non-zero attack components, the
    other components are drawn from U[-1, 1] and ``c_k`` is solved from the
    hyperplane equation through the origin.
    """
    attack = np.asarray(attack, dtype=float)
    n = attack.size
    if n < 2:
        raise DimensionError("a cruise direction needs at least 2 dimensions")
    candidates = np.flatnonzero(np.abs(attack) > ZERO_TOL)
    if candidates.size == 0:
        raise ValueError("attack vector is effectively zero; the eagle must not move")
    gen = rng.movement
    k = int(candidates[gen.integers(candidates.size)])
    free = np.delete(np.arange(n), k)
    cruise = np.zeros(n)
    while True:
        cruise[free] = gen.uniform(-1.0, 1.0, size=n - 1)
        if np.any(cruise[free] != 0.0):
            break
    cruise[k] = -np.dot(attack[free], cruise[free]) / attack[k]
    return cruise


def coefficients(t: float, T: int, params: GeoParams = GeoParams()) -> tuple[float, float]:
    """Linear schedules of the attack and cruise propensities at iteration ``t``."""
    if T < 1:
        raise ConfigurationError(f"max iterations must be >= 1, got {T}")
    if not 0 <= t <= T:
        raise ConfigurationError(f"iteration {t} outside [0, {T}]")
    if t == T:
        # t/T == 1 exactly, but p0 + |pT - p0| can still round away from pT
        return float(params.paT), float(params.pcT)
    frac = t / T
    pa = params.pa0 + frac * abs(params.paT - params.pa0)
    pc = params.pc0 - frac * abs(params.pcT - params.pc0)
    return pa, pc


def step_vector(
    attack: np.ndarray,
    cruise: np.ndarray,
    pa: float,
    pc: float,
    rng: RngStream,
    scale: float = 1.0,
) -> np.ndarray:
    """``scale * (r1*pa*A/|A| + r2*pc*C/|C|)`` with fresh ``r1, r2 ~ U[0, 1]``.

    A zero ``cruise`` (one-dimensional problems) drops the second term; ``r2``
    is still drawn so the stream advances the same way in every dimension.
    """
    attack = np.asarray(attack, dtype=float)
    cruise = np.asarray(cruise, dtype=float)
    a_norm = np.linalg.norm(attack)
    if a_norm <= ZERO_TOL:
        raise ValueError("zero attack vector; the caller must skip the move")
    r1, r2 = rng.movement.random(2)
    step = r1 * pa * attack / a_norm
    c_norm = np.linalg.norm(cruise)
    if c_norm > 0.0:
        step = step + r2 * pc * cruise / c_norm
    return scale * step


def move_eagle(
    agent: Agent,
    prey_pos: np.ndarray,
    pa: float,
    pc: float,
    evaluate: Evaluator,
    space: SearchSpace,
    rng: RngStream,
    step_scale: str = "radius",
) -> bool:
    """Move one eagle toward ``prey_pos``; returns False when it stays put."""
    attack = attack_vector(agent.position, prey_pos)
    radius = float(np.linalg.norm(attack))
    if radius <= ZERO_TOL:
        return False
    if attack.size >= 2:
        cruise = cruise_vector(attack, rng)
    else:
        cruise = np.zeros(1)
    scale = radius if step_scale == "radius" else 1.0
    new_pos = clamp(agent.position + step_vector(attack, cruise, pa, pc, rng, scale), space)
    update_memory(agent, new_pos, evaluate(new_pos))
    return True


def geo_iteration(
    population: Sequence[Agent],
    t: int,
    T: int,
    params: GeoParams,
    evaluate: Evaluator,
    space: SearchSpace,
    rng: RngStream,
) -> Sequence[Agent]:
    """One sweep over the flock in index order.

    Prey are drawn uniformly from all memories (self included) and read live,
    so a later eagle can chase a memory an earlier eagle just improved.
    """
    pa, pc = coefficients(t, T, params)
    n = len(population)
    for agent in population:
        prey = population[int(rng.movement.integers(n))]
        move_eagle(agent, prey.best_position.copy(), pa, pc, evaluate, space, rng, params.step_scale)
    return population


def run_geo(
    config: RunConfig,
    objective: Objective,
    space: SearchSpace,
    observer: Optional[Observer] = None,
) -> RunResult:
    check_algorithm(config, Algorithm.GEO)
    params = config.params if config.params is not None else GeoParams()
    rng = RngStream(config.seed)
    evaluate = Evaluator(objective)
    population = init_population(space, config.pop_size, rng)
    evaluate_population(population, evaluate)
    state = RunState(config.max_iters, observer)
    for t in range(1, config.max_iters + 1):
        geo_iteration(population, t, config.max_iters, params, evaluate, space, rng)
        state.record(t, population)
    return state.result(population, evaluate)
