"""Golden eagle, genetic and hybrid metaheuristics with a benchmark harness."""

from .baselines import GwoParams, PsoParams, ScaParams, run_gwo, run_pso, run_sca
from .core import (
    Agent,
    Algorithm,
    ConfigurationError,
    DimensionError,
    RngStream,
    RunConfig,
    RunResult,
    SearchSpace,
    clamp,
    init_population,
    select_gbest,
    update_memory,
)
from .gego import GegoParams, genetic_phase, run_gego
from .genetic import Chromosome, Crossover, GaParams, decode, encode, run_ga
from .geo import GeoParams, coefficients, cruise_vector, run_geo
from .harness import ExperimentSpec, SummaryCell, run_algorithm, run_experiment, summarize, write_report

__all__ = [
    "Agent", "Algorithm", "Chromosome", "ConfigurationError", "Crossover", "DimensionError",
    "ExperimentSpec", "GaParams", "GegoParams", "GeoParams", "GwoParams", "PsoParams",
    "RngStream", "RunConfig", "RunResult", "ScaParams", "SearchSpace", "SummaryCell",
    "clamp", "coefficients", "cruise_vector", "decode", "encode", "genetic_phase",
    "init_population", "run_algorithm", "run_experiment", "run_ga", "run_gego", "run_geo",
    "run_gwo", "run_pso", "run_sca", "select_gbest", "summarize", "update_memory",
    "write_report",
]
