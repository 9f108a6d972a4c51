import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gegopt.benchmarks.classical import get_classical
from gegopt.core import (
    Agent,
    ConfigurationError,
    DimensionError,
    Evaluator,
    RngStream,
    RunConfig,
    SearchSpace,
    evaluate_population,
    init_population,
)
from gegopt.genetic import (
    Chromosome,
    Crossover,
    GaParams,
    decode,
    elite_count,
    encode,
    ga_generation,
    linear_crossover,
    mutate_bits,
    mutate_position,
    run_ga,
    single_point_crossover,
    tournament_select,
)

from conftest import sphere

BOX = SearchSpace.box(-100, 100, 2)


def test_bounds_encode_to_extreme_codes():
    assert not encode(BOX.lower, BOX).bits.any()
    assert encode(BOX.upper, BOX).bits.all()
    assert np.array_equal(decode(encode(BOX.lower, BOX)), BOX.lower)
    assert np.array_equal(decode(encode(BOX.upper, BOX)), BOX.upper)


def test_encode_is_big_endian_and_concatenated():
    space = SearchSpace.box(0, 15, 2)
    chrom = encode([5.0, 12.0], space, bits=4)
    assert chrom.bits.tolist() == [0, 1, 0, 1, 1, 1, 0, 0]
    assert chrom.codes().tolist() == [5, 12]


def test_decode_midpoint_code():
    space = SearchSpace.box(-100, 100, 1)
    bits = np.zeros(16, dtype=np.uint8)
    bits[0] = 1  # code 2**15
    x = decode(Chromosome(bits, space))
    assert x[0] == pytest.approx(-100 + 32768 / 65535 * 200, abs=1e-12)
    assert x[0] == pytest.approx(0.0015259021896696, abs=1e-12)


def test_encode_clamps_outside_points():
    assert encode([500.0, -500.0], BOX) == encode([100.0, -100.0], BOX)


def test_chromosome_length_checked():
    with pytest.raises(DimensionError):
        Chromosome(np.zeros(5), BOX)


@settings(max_examples=50)
@given(st.integers(0, 2**32 - 1))
def test_codec_roundtrip_error(seed):
    space = SearchSpace.box(-100, 100, 30)
    x = np.random.default_rng(seed).uniform(-100, 100, size=30)
    assert np.all(np.abs(decode(encode(x, space)) - x) <= 200 / 2**16)


def test_single_point_cut_five():
    space = SearchSpace.box(0, 1, 1)
    p1 = Chromosome(np.ones(16), space)
    p2 = Chromosome(np.zeros(16), space)
    c1, c2 = single_point_crossover(p1, p2, k=5)
    assert c1.bits.tolist() == [1] * 5 + [0] * 11
    assert c2.bits.tolist() == [0] * 5 + [1] * 11


def test_single_point_identical_parents():
    p = encode([12.3, -45.6], BOX)
    for k in (1, 7, 31):
        c1, c2 = single_point_crossover(p, p, k=k)
        assert c1 == p and c2 == p


def test_single_point_rejects_bad_cut():
    p = encode([0.0, 0.0], BOX)
    for k in (0, 32):
        with pytest.raises(ValueError):
            single_point_crossover(p, p, k=k)
    with pytest.raises(ValueError):
        single_point_crossover(p, p)


@given(st.integers(0, 2**32 - 1))
def test_single_point_conserves_loci(seed):
    rng = RngStream(seed)
    p1 = Chromosome(rng.init.integers(0, 2, 32), BOX)
    p2 = Chromosome(rng.init.integers(0, 2, 32), BOX)
    c1, c2 = single_point_crossover(p1, p2, rng=rng)
    assert np.array_equal(np.sort([p1.bits, p2.bits], axis=0), np.sort([c1.bits, c2.bits], axis=0))


def test_linear_crossover_alphas():
    a, b = np.array([0.0, 4.0]), np.array([2.0, -4.0])
    c1, c2 = linear_crossover(a, b, alpha=0.5)
    assert np.array_equal(c1, [1.0, 0.0]) and np.array_equal(c2, [1.0, 0.0])
    c1, c2 = linear_crossover(a, b, alpha=1.0)
    assert np.array_equal(c1, a) and np.array_equal(c2, b)
    with pytest.raises(DimensionError):
        linear_crossover(a, np.zeros(3), alpha=0.5)


@given(st.integers(0, 2**32 - 1))
def test_linear_crossover_stays_in_segment(seed):
    rng = RngStream(seed)
    a, b = rng.init.uniform(-100, 100, size=(2, 3))
    c1, c2 = linear_crossover(a, b, rng)
    assert np.allclose(c1 + c2, a + b)
    lo, hi = np.minimum(a, b) - 1e-12, np.maximum(a, b) + 1e-12
    assert np.all((lo <= c1) & (c1 <= hi))


def test_mutation_rate_extremes():
    p = encode([3.0, -7.0], BOX)
    assert mutate_bits(p, 0.0, RngStream(0)) == p
    assert np.array_equal(mutate_bits(p, 1.0, RngStream(0)).bits, 1 - p.bits)
    with pytest.raises(ValueError):
        mutate_bits(p, 1.5, RngStream(0))


def test_mutation_flip_count_is_binomial():
    space = SearchSpace.box(-1, 1, 10)  # 160 bits
    chrom = encode(np.zeros(10), space)
    rng = RngStream(11)
    trials = 100_000
    flips = sum(int(np.count_nonzero(mutate_bits(chrom, 0.001, rng).bits != chrom.bits))
                for _ in range(trials))
    mean = flips / trials
    sigma = math.sqrt(160 * 0.001 * 0.999 / trials)
    assert abs(mean - 0.16) <= 3 * sigma


def test_mutate_position_without_flips_is_exact():
    x = np.array([1.2345678, -9.87654321])
    assert np.array_equal(mutate_position(x, BOX, GaParams(mutation_rate=0.0), RngStream(0)), x)


def _agents(bests):
    out = []
    for i, b in enumerate(bests):
        a = Agent(np.array([float(i), 0.0]))
        a.fitness = a.best_fitness = b
        out.append(a)
    return out


def test_tournament_examples():
    pop = _agents([1.0, 9.0])
    assert tournament_select(pop, RngStream(0), draws=(0, 1)) == 0
    assert tournament_select(pop, RngStream(0), draws=(1, 0)) == 0
    assert tournament_select(_agents([4.0, 4.0]), RngStream(0), draws=(1, 0)) == 1
    with pytest.raises(ValueError):
        tournament_select(_agents([1.0]), RngStream(0))


def test_tournament_ties_spread_evenly():
    pop = _agents([2.0] * 4)
    rng = RngStream(3)
    counts = np.bincount([tournament_select(pop, rng) for _ in range(4000)], minlength=4)
    assert np.all(np.abs(counts - 1000) < 150)


def test_elite_count():
    assert elite_count(0.05, 20) == 1
    assert elite_count(0.05, 21) == 2
    assert elite_count(0.0, 20) == 0


def test_params_validation():
    with pytest.raises(ConfigurationError):
        GaParams(elite_fraction=1.0)
    with pytest.raises(ConfigurationError):
        GaParams(mutation_rate=-0.1)
    with pytest.raises(ValueError):
        GaParams(crossover="two_point")
    assert GaParams(crossover="single_point_binary").crossover is Crossover.SINGLE_POINT_BINARY


@pytest.mark.parametrize("crossover", list(Crossover))
def test_generation_keeps_elite_and_memory(crossover):
    params = GaParams(crossover=crossover, elite_fraction=0.1)
    rng = RngStream(21)
    pop = init_population(BOX, 11, rng)
    ev = Evaluator(sphere)
    evaluate_population(pop, ev)
    for _ in range(5):
        before = [a.best_fitness for a in pop]
        order = sorted(range(11), key=lambda i: (before[i], i))
        elite = [pop[i].best_position.copy() for i in order[:2]]
        ga_generation(pop, params, ev, BOX, rng)
        assert all(a.best_fitness <= b for a, b in zip(pop, before))
        assert all(np.array_equal(pop[i].best_position, e) for i, e in zip(order[:2], elite))
        assert all(BOX.contains(a.position) for a in pop)


def test_run_ga_frozen_regression():
    result = run_ga(RunConfig("ga", 20, 30, 5), sphere, BOX)
    assert result.gbest_value == pytest.approx(3.4328899235266874, rel=1e-12)
    assert np.all(np.diff(result.history) <= 0)


def test_run_ga_binary_path():
    params = GaParams(crossover=Crossover.SINGLE_POINT_BINARY)
    result = run_ga(RunConfig("ga", 20, 50, 1, params), sphere, BOX)
    initial = min(sphere(a.position) for a in init_population(BOX, 20, RngStream(1)))
    assert result.gbest_value < initial
    assert np.all(np.diff(result.history) <= 0)


def test_griewank_mean_within_order():
    fn = get_classical("griewank")
    vals = [run_ga(RunConfig("ga", 20, 100, s), fn, fn.space()).gbest_value for s in range(40)]
    assert np.mean(vals) <= 1.0
