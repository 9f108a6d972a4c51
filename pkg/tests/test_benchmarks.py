import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gegopt.benchmarks.classical import CLASSICAL, eval_classical, get_classical
from gegopt.benchmarks.composite import (
    CF_LAYOUTS,
    COMPONENTS,
    CompositeDataError,
    CompositeSpec,
    composite_weights,
    data_path,
    eval_composite,
    load_composite_data,
    make_cf,
    write_composite_data,
)
from gegopt.core import DimensionError

WITH_OPTIMUM = sorted(n for n, f in CLASSICAL.items() if f.optimum is not None)


def test_sixteen_functions():
    assert len(CLASSICAL) == 16


@pytest.mark.parametrize("name", WITH_OPTIMUM)
def test_known_optimum(name):
    fn = get_classical(name)
    dims = [fn.fixed_dims] if fn.fixed_dims else [2, 5, 10]
    for d in dims:
        where, value = fn.known_optimum(d)
        assert abs(fn(where) - value) <= 1e-9


def test_listed_optima_values():
    table = {"matyas": 0, "camel3": 0, "exponential": -1, "dropwave": -1, "himmelblau": 0,
             "griewank": 0, "ackley01": 0, "salomon": 0, "levy13": 0, "beale": 0, "qing": 0,
             "parsopoulos": 0}
    for name, value in table.items():
        assert get_classical(name).optimum[1] == value
    assert np.array_equal(get_classical("himmelblau").known_optimum()[0], [3, 2])
    assert np.array_equal(get_classical("beale").known_optimum()[0], [3, 0.5])
    assert np.allclose(get_classical("qing").known_optimum(3)[0], np.sqrt([1, 2, 3]))


def test_spot_values():
    assert eval_classical("matyas", [0, 0]) == 0
    assert eval_classical("dropwave", [0, 0]) == -1
    assert eval_classical("matya", [1, 1]) == pytest.approx(0.04)
    assert eval_classical("ackley", [0, 0]) < 1e-15
    # literature value of the egg holder minimum
    assert eval_classical("eggholder", [512, 404.2319]) == pytest.approx(-959.6407, abs=1e-4)


def test_michalewicz_minimum():
    where, value = get_classical("michalewicz").known_optimum()
    assert abs(eval_classical("michalewicz", where) - (-1.801303)) <= 1e-6


@pytest.mark.parametrize("name", WITH_OPTIMUM)
def test_optimum_is_locally_minimal(name):
    fn = get_classical(name)
    where, value = fn.known_optimum()
    space = fn.space()
    gen = np.random.default_rng(0)
    for scale in (1e-6, 1e-3, 1e-1):
        pts = np.clip(where + gen.normal(scale=scale, size=(200, where.size)), space.lower, space.upper)
        assert min(fn(p) for p in pts) >= value - 1e-12


def test_fixed_dims_enforced():
    with pytest.raises(DimensionError):
        eval_classical("beale", [1, 2, 3])
    with pytest.raises(DimensionError):
        get_classical("matyas").space(3)
    assert get_classical("griewank").space(7).dims == 7


def test_unknown_name():
    with pytest.raises(KeyError):
        get_classical("rosenbrock_nd")


@pytest.mark.parametrize("name", sorted(CLASSICAL))
def test_evaluation_is_pure(name):
    fn = get_classical(name)
    x = np.random.default_rng(1).uniform(fn.space().lower, fn.space().upper)
    x_copy = x.copy()
    assert fn(x) == fn(x) and np.array_equal(x, x_copy)


# composite ------------------------------------------------------------------

def test_components_vanish_at_origin():
    for name, f in COMPONENTS.items():
        for d in (2, 10, 30):
            assert abs(f(np.zeros(d))) <= 1e-9, name


def test_cf1_at_first_shift_is_f_star():
    spec = make_cf(1, 10)
    assert eval_composite(spec, spec.shifts[0]) == 2100.0


@pytest.mark.parametrize("k", sorted(CF_LAYOUTS))
def test_f_star_table(k):
    assert make_cf(k, 2).f_star == 2000 + 100 * k


def test_equal_distance_symmetry():
    spec = CompositeSpec([lambda z: 3.0] * 3, [20, 20, 20], [2, 2, 2], [0, 0, 0], 100.0,
                         np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0]]), np.array([np.eye(2)] * 3))
    assert eval_composite(spec, [0.0, 0.0]) == pytest.approx(3.0 * 2 + 100.0, abs=1e-12)


def _rotation(gen, d):
    q, r = np.linalg.qr(gen.normal(size=(d, d)))
    return q * np.sign(np.diag(r))


def _straight_line(x, shifts, rots, sigma, lam, bias, f_star, funcs):
    d = x.size
    ws, vals = [], []
    for o, m, s, l, b, f in zip(shifts, rots, sigma, lam, bias, funcs):
        dist2 = float(np.dot(x - o, x - o))
        ws.append(math.exp(-dist2 / (2 * d * s * s)) / math.sqrt(dist2))
        vals.append(l * f(m @ (x - o)) + b)
    total = sum(ws)
    return sum(w / total * v for w, v in zip(ws, vals)) + f_star


@settings(max_examples=100)
@given(st.integers(0, 2**32 - 1))
def test_matches_straight_line_oracle(seed):
    gen = np.random.default_rng(seed)
    d = 5
    funcs = [COMPONENTS["rastrigin"], COMPONENTS["griewank"], COMPONENTS["ackley"]]
    shifts = gen.uniform(-80, 80, size=(3, d))
    rots = np.array([_rotation(gen, d) for _ in range(3)])
    spec = CompositeSpec(funcs, [10, 20, 30], [1, 10, 1], [0, 100, 200], 2200.0, shifts, rots)
    x = gen.uniform(-100, 100, size=d)
    expected = _straight_line(x, shifts, rots, [10, 20, 30], [1, 10, 1], [0, 100, 200], 2200.0, funcs)
    assert eval_composite(spec, x) == pytest.approx(expected, rel=1e-9, abs=1e-9)


@settings(max_examples=100)
@given(st.integers(1, 10), st.integers(0, 2**32 - 1))
def test_weights_form_a_distribution(k, seed):
    spec = make_cf(k, 10)
    x = np.random.default_rng(seed).uniform(-100, 100, size=10)
    w = composite_weights(spec, x)
    assert np.all(w >= 0) and abs(w.sum() - 1) <= 1e-12


def test_weights_collapse_on_a_shift():
    spec = make_cf(4, 10)
    assert composite_weights(spec, spec.shifts[2]).tolist() == [0, 0, 1, 0]


@pytest.mark.parametrize("k", sorted(CF_LAYOUTS))
def test_never_below_f_star_near_component_optima(k):
    spec = make_cf(k, 10)
    gen = np.random.default_rng(k)
    for o in spec.shifts:
        for scale in (0.0, 1e-8, 1e-3, 1.0):
            x = o + gen.normal(scale=scale, size=10)
            assert eval_composite(spec, x) >= spec.f_star - 1e-9


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        eval_composite(make_cf(1, 10), np.zeros(3))


def test_spec_validation():
    with pytest.raises(CompositeDataError):
        CompositeSpec([lambda z: 0.0] * 2, [1], [1, 1], [0, 0], 0.0, np.zeros((2, 2)),
                      np.array([np.eye(2)] * 2))


def test_fallback_is_seeded(tmp_path):
    s1, r1, notes = load_composite_data(tmp_path / "missing.txt", 4, 3, seed=9)
    s2, _, _ = load_composite_data(None, 4, 3, seed=9)
    assert np.array_equal(s1, s2)
    assert np.all(np.abs(s1) <= 80)
    assert np.array_equal(r1, np.array([np.eye(4)] * 3))
    assert notes and "seeded" in notes[0]
    assert not np.array_equal(s1, load_composite_data(None, 4, 3, seed=10)[0])


def test_file_roundtrip(tmp_path):
    gen = np.random.default_rng(2)
    shifts = gen.uniform(-80, 80, size=(3, 4))
    rots = np.array([np.eye(4), _rotation(gen, 4), np.eye(4)])
    path = data_path(tmp_path, 1, 4)
    assert path.name == "cf1_D4.txt"
    write_composite_data(path, shifts, rots)
    s, r, notes = load_composite_data(path, 4, 3)
    assert np.array_equal(s, shifts) and np.array_equal(r, rots) and notes == []
    spec = make_cf(1, 4, data_dir=tmp_path)
    assert np.array_equal(spec.shifts, shifts) and spec.annotations == []


def test_identity_file_loads_verbatim(tmp_path):
    path = tmp_path / "cf2_D3.txt"
    lines = []
    for i in range(3):
        lines.append(" ".join(str(float(i + j)) for j in range(3)))
        lines += [" ".join("1" if a == b else "0" for b in range(3)) for a in range(3)]
    path.write_text("\n".join(lines))
    s, r, _ = load_composite_data(path, 3, 3)
    assert s.tolist() == [[0, 1, 2], [1, 2, 3], [2, 3, 4]]
    assert np.array_equal(r, np.array([np.eye(3)] * 3))


def test_perturbed_rotation_rejected(tmp_path):
    rots = np.array([np.eye(3)] * 3)
    rots[1, 0, 1] = 1e-6
    path = tmp_path / "bad.txt"
    write_composite_data(path, np.zeros((3, 3)), rots)
    with pytest.raises(CompositeDataError):
        load_composite_data(path, 3, 3)


def test_malformed_file_rejected(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("1 2 x\n")
    with pytest.raises(CompositeDataError):
        load_composite_data(path, 3, 1)
    path.write_text("1 2 3\n1 0 0\n")
    with pytest.raises(CompositeDataError):
        load_composite_data(path, 3, 1)
