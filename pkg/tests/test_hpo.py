import json
import math
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gegopt.core import DimensionError, ConfigurationError
from gegopt.hpo import (
    BATCH_SIZES,
    HPO_SPACE,
    SURROGATE_MIN,
    SURROGATE_OPTIMUM,
    AnnConfig,
    ExternalFitness,
    ExternalFitnessError,
    decode_config,
    external_fitness,
    make_adapter,
    random_search,
    run_hpo,
    surrogate_fitness,
)

STUB = str(Path(__file__).with_name("stub_trainer.py"))


def stub(*args):
    return [sys.executable, STUB, *args]


def vec(neurons, dropouts, batch, lr):
    out = []
    for n, d in zip(neurons, dropouts):
        out += [n, d]
    return np.array(out + [batch, lr], dtype=float)


def test_learning_rate_endpoint():
    assert decode_config(vec([200] * 4, [0] * 4, 0, -2.0)).learning_rate == 1e-2
    assert decode_config(vec([200] * 4, [0] * 4, 0, -4.0)).learning_rate == pytest.approx(1e-4, rel=1e-15)


def test_batch_code_floors():
    assert decode_config(vec([200] * 4, [0] * 4, 6.3, -3)).batch_size == 224


def test_reference_architecture():
    v = vec([378.4, 191.9, 220.0, 106.5], [0.2, 1.5, 0.7, 0.0], 6.3, -2.0)
    assert decode_config(v) == AnnConfig(((378, 0.0), (191, 0.1), (220, 0.0), (106, 0.0)), 224, 0.01)


def test_wrong_arity():
    with pytest.raises(DimensionError):
        decode_config(np.zeros(9))


def test_truncation_rule():
    assert len(decode_config(vec([300, 5, 300, 300], [0] * 4, 0, -3)).layers) == 1
    assert len(decode_config(vec([300, 300, 9.99, 300], [0] * 4, 0, -3)).layers) == 2
    cfg = decode_config(vec([300, 300, 300, 10.0], [0] * 4, 0, -3))
    assert len(cfg.layers) == 4 and cfg.layers[3][0] == 16  # kept, then clamped
    # layer 1 never truncates
    assert len(decode_config(vec([0, 0, 0, 0], [0] * 4, 0, -3)).layers) == 1


def test_out_of_range_codes_are_clamped():
    cfg = decode_config(vec([1000, 600, 40, 600], [7, -1, 2.5, 3.0], -3, 5))
    assert cfg.layers == ((512, 0.5), (512, 0.0), (40, 0.5), (512, 0.5))
    assert cfg.batch_size == 32 and cfg.learning_rate == 1e-2


@settings(max_examples=20)
@given(st.integers(0, 2**32 - 1))
def test_decoder_totality(seed):
    gen = np.random.default_rng(seed)
    for v in gen.uniform(HPO_SPACE.lower, HPO_SPACE.upper, size=(500, 10)):
        cfg = decode_config(v)
        assert cfg.violations() == []
        floors = np.floor(v[[2, 4, 6]])
        first_cut = next((i + 1 for i, f in enumerate(floors) if f < 10), 4)
        assert len(cfg.layers) == first_cut


def test_batch_is_monotone():
    base = vec([300] * 4, [0] * 4, 0, -3)
    sizes = []
    for u in np.linspace(-1, 9, 2001):
        base[8] = u
        sizes.append(decode_config(base).batch_size)
    assert all(a <= b for a, b in zip(sizes, sizes[1:]))
    assert set(sizes) == set(BATCH_SIZES)


def test_learning_rate_is_log_uniform():
    u = np.random.default_rng(0).uniform(-4, -2, size=20000)
    rates = np.array([decode_config(vec([300] * 4, [0] * 4, 0, x)).learning_rate for x in u])
    assert rates.min() >= 1e-4 and rates.max() <= 1e-2
    counts = np.histogram(np.log10(rates), bins=4, range=(-4, -2))[0]
    assert np.all(np.abs(counts - 5000) < 300)


def test_surrogate_optimum_is_exact_and_reachable():
    assert surrogate_fitness(SURROGATE_OPTIMUM) == SURROGATE_MIN
    v = vec([512.5, 128.5, 5, 5], [1.5, 1.5, 0, 0], 3.5, -3.0)
    assert decode_config(v) == SURROGATE_OPTIMUM
    assert surrogate_fitness(decode_config(v)) == SURROGATE_MIN


def test_surrogate_grid_bound():
    gen = np.random.default_rng(3)
    values = [surrogate_fitness(decode_config(v))
              for v in gen.uniform(HPO_SPACE.lower, HPO_SPACE.upper, size=(10_000, 10))]
    assert min(values) >= SURROGATE_MIN


def test_config_dict_roundtrip():
    assert AnnConfig.from_dict(SURROGATE_OPTIMUM.to_dict()) == SURROGATE_OPTIMUM
    assert json.loads(json.dumps(SURROGATE_OPTIMUM.to_dict()))["batch_size"] == 128


# external adapter --------------------------------------------------------

def test_echo_passthrough():
    with ExternalFitness(stub("echo", "0.0256")) as ep:
        assert external_fitness(SURROGATE_OPTIMUM, ep) == 0.0256
        assert ep.annotations == []


def test_malformed_reply():
    with ExternalFitness(stub("malformed")) as ep:
        assert ep(SURROGATE_OPTIMUM) == math.inf
        assert len(ep.annotations) == 1 and "malformed" in ep.annotations[0]


def test_mismatched_id():
    with ExternalFitness(stub("wrongid")) as ep:
        assert ep(SURROGATE_OPTIMUM) == math.inf
        assert "id" in ep.annotations[0]


def test_timeout_then_stale_reply_skipped():
    with ExternalFitness(stub("slow-first", "1.0"), timeout=0.2) as ep:
        assert ep(SURROGATE_OPTIMUM) == math.inf
        assert "no reply" in ep.annotations[0]
        ep.timeout = 5.0
        assert ep(SURROGATE_OPTIMUM) == 2.0  # reply to id 1 is dropped


def test_dead_process():
    ep = ExternalFitness(stub("exit"))
    try:
        assert ep(SURROGATE_OPTIMUM) == math.inf
        assert ep(SURROGATE_OPTIMUM) == math.inf
        assert len(ep.annotations) == 2
    finally:
        ep.close()


def test_spawn_failure():
    with pytest.raises(ExternalFitnessError):
        ExternalFitness("/nonexistent/trainer --fast")


def test_transcript(tmp_path):
    log = tmp_path / "log.jsonl"
    ep = ExternalFitness(stub("sum", "--log", str(log)))
    gen = np.random.default_rng(0)
    for v in gen.uniform(HPO_SPACE.lower, HPO_SPACE.upper, size=(100, 10)):
        cfg = decode_config(v)
        assert ep(cfg) == -cfg.total_neurons / 2048
    ep.close()
    lines = log.read_text().splitlines()
    assert lines[-1] == "EOF"
    messages = [json.loads(l) for l in lines[:-1]]
    assert messages[-1] == {"cmd": "shutdown"}
    ids = [m["id"] for m in messages[:-1]]
    assert ids == list(range(1, 101))
    assert ep.requests == 100 and ep.annotations == []
    assert set(messages[0]["config"]) == {"layers", "batch_size", "learning_rate"}


def test_make_adapter():
    assert make_adapter("surrogate")[0] is surrogate_fitness
    with pytest.raises(ConfigurationError):
        make_adapter("grpc://host")
    adapter, label = make_adapter(f"exec:{sys.executable} {STUB} echo 1.5")
    try:
        assert adapter(SURROGATE_OPTIMUM) == 1.5 and label.startswith("exec:")
    finally:
        adapter.close()


# run_hpo -------------------------------------------------------------------

def test_gego_beats_random_search():
    report = run_hpo("gego", "surrogate", pop_size=10, iters=15, trials=10, seed=0)
    baseline = [random_search("surrogate", t.evaluations, seed=t.seed).best_fitness
                for t in report.trials]
    assert report.summary.mean <= np.mean(baseline)


def test_single_trial_is_reproducible():
    a = run_hpo("gego", trials=1, seed=42)
    b = run_hpo("gego", trials=1, seed=42)
    assert a.trials[0].config == b.trials[0].config
    assert a.to_dict() == b.to_dict()


@pytest.mark.parametrize("algo", ["geo", "gego"])
def test_reports_valid_configs(algo):
    report = run_hpo(algo, trials=10, seed=1)
    assert len(report.trials) == 10
    for t in report.trials:
        assert t.config.violations() == []
        assert t.config == decode_config(t.best_vector)
        assert surrogate_fitness(t.config) == t.best_fitness
        assert HPO_SPACE.contains(t.best_vector)


def test_external_run(tmp_path):
    report = run_hpo("geo", f"exec:{sys.executable} {STUB} sum", pop_size=4, iters=3, trials=2)
    assert report.annotations == []
    assert all(t.best_fitness < 0 for t in report.trials)
    report.write(tmp_path / "hpo.json")
    data = json.loads((tmp_path / "hpo.json").read_text())
    assert data["adapter"].startswith("exec:") and len(data["trials"]) == 2


def test_random_search_budget():
    t = random_search(surrogate_fitness, 50, seed=3)
    assert t.evaluations == 50 and t.config.violations() == []
