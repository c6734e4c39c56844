import pickle
from collections import Counter

import numpy as np
import pytest

from isingsynth.errors import ConfigurationError
from isingsynth.ga import (
    GaConfig,
    GaEngine,
    decode_genome,
    ga_mutate,
    random_genome,
    sus_select,
    two_point_crossover,
)
from isingsynth.fitness import target_matrix
from isingsynth.gates import GateOp, compose_gates
from isingsynth.linalg import is_unitary
from conftest import FakeRng


def cfg2(**overrides) -> GaConfig:
    base = dict(number_of_wires=2, size_of_individual=5)
    base.update(overrides)
    return GaConfig(**base)


def test_config_validation():
    with pytest.raises(ConfigurationError):
        cfg2(population=1)
    with pytest.raises(ConfigurationError):
        cfg2(mutation_rate=-0.1)
    with pytest.raises(ConfigurationError):
        cfg2(structural_rate=2.0)


def test_gate_choices_cover_gate_set():
    choices = cfg2().gate_choices
    # 2 wires: 6 rotations + 1 interaction
    assert len(choices) == 7
    assert sum(1 for c in choices if c.kind == "interaction") == 1
    choices3 = GaConfig(number_of_wires=3, size_of_individual=1).gate_choices
    assert len(choices3) == 12
    assert {c.pair for c in choices3 if c.kind == "interaction"} == {
        (1, 2), (1, 3), (2, 3)
    }


def test_random_genome_shape(rng):
    cfg = cfg2(size_of_individual=8)
    g = random_genome(cfg, rng)
    assert len(g) == 8
    for gene in g:
        assert gene.kind in ("rotation", "interaction")
        assert 0.0 <= gene.theta < 2.0 * np.pi


def test_decode_genome_is_shared_composition(rng):
    cfg = cfg2()
    g = random_genome(cfg, rng)
    assert np.array_equal(
        decode_genome(g, cfg.number_of_wires), compose_gates(g, cfg.number_of_wires)
    )
    assert is_unitary(decode_genome(g, cfg.number_of_wires))


def test_two_point_crossover_swaps_slice(rng):
    cfg = cfg2(size_of_individual=6)
    a = random_genome(cfg, rng)
    b = random_genome(cfg, rng)
    fake = FakeRng(integer_values=[[2, 5]])
    ca, cb = two_point_crossover(a, b, fake)
    assert ca == a[:2] + b[2:5] + a[5:]
    assert cb == b[:2] + a[2:5] + b[5:]
    # gene multiset is conserved across the pair
    assert Counter(ca) + Counter(cb) == Counter(a) + Counter(b)


def test_two_point_crossover_degenerate_cuts(rng):
    cfg = cfg2(size_of_individual=4)
    a = random_genome(cfg, rng)
    b = random_genome(cfg, rng)
    ca, cb = two_point_crossover(a, b, FakeRng(integer_values=[[3, 3]]))
    assert (ca, cb) == (a, b)
    single = (a[0],)
    assert two_point_crossover(single, (b[0],), rng) == (single, (b[0],))
    with pytest.raises(ConfigurationError):
        two_point_crossover(a, a[:2], rng)


def test_sus_proportionality():
    rng = np.random.default_rng(42)
    fitnesses = [0.1, 0.2, 0.3, 0.4]
    counts = Counter()
    rounds = 3000
    for _ in range(rounds):
        counts.update(sus_select(fitnesses, 4, rng))
    freqs = [counts[i] / (4 * rounds) for i in range(4)]
    assert freqs == pytest.approx([0.1, 0.2, 0.3, 0.4], abs=0.02)


def test_sus_spread_guarantee():
    # SUS with equal fitness picks every individual exactly once
    rng = np.random.default_rng(0)
    for _ in range(50):
        picks = sus_select([1.0, 1.0, 1.0, 1.0], 4, rng)
        assert sorted(picks) == [0, 1, 2, 3]


def test_sus_zero_fitness_fallback():
    rng = np.random.default_rng(1)
    picks = sus_select([0.0, 0.0, 0.0], 6, rng)
    assert len(picks) == 6
    assert all(0 <= p < 3 for p in picks)


def test_ga_mutate_rate_zero_is_identity(rng):
    cfg = cfg2(mutation_rate=0.0)
    g = random_genome(cfg, rng)
    assert ga_mutate(g, cfg, rng) == g


def test_ga_mutate_parametric_bounds(rng):
    cfg = cfg2(mutation_rate=1.0, structural_rate=0.0, mutation_range=0.1)
    g = random_genome(cfg, rng)
    mutated = ga_mutate(g, cfg, rng)
    for old, new in zip(g, mutated):
        assert (old.kind, old.wire, old.axis, old.pair) == (
            new.kind, new.wire, new.axis, new.pair
        )
        delta = abs(new.theta - old.theta)
        delta = min(delta, 2.0 * np.pi - delta)
        assert delta <= 0.1 + 1e-12


def test_ga_mutate_structural_keeps_theta(rng):
    cfg = cfg2(mutation_rate=1.0, structural_rate=1.0)
    g = random_genome(cfg, rng)
    mutated = ga_mutate(g, cfg, rng)
    for old, new in zip(g, mutated):
        assert new.theta == old.theta


def test_engine_elitism_and_monotone_best():
    cfg = cfg2(population=20, max_generations=60)
    engine = GaEngine(cfg, target_matrix("CNOT"), seed=4)
    prev_best = 0.0
    gen_bests = []
    while not engine.done:
        gen_best, gen_mean = engine.step()
        gen_bests.append(gen_best)
        assert 0.0 <= gen_mean <= gen_best <= 1.0
        assert engine.best_fitness >= prev_best
        prev_best = engine.best_fitness
    # the elite is carried over, so the per-generation best never regresses
    assert all(b >= a - 1e-12 for a, b in zip(gen_bests, gen_bests[1:]))
    assert engine.stop_reason == "generation-limit"


def test_engine_deterministic_per_seed():
    cfg = cfg2(population=10, max_generations=40)
    t = target_matrix("CNOT")
    trace_a = []
    engine = GaEngine(cfg, t, seed=8)
    while not engine.done:
        trace_a.append(engine.step())
    engine = GaEngine(cfg, t, seed=8)
    trace_b = []
    while not engine.done:
        trace_b.append(engine.step())
    assert trace_a == trace_b


def test_engine_pickle_round_trip():
    cfg = cfg2(population=10, max_generations=100)
    a = GaEngine(cfg, target_matrix("CNOT"), seed=2)
    for _ in range(30):
        a.step()
    b = pickle.loads(pickle.dumps(a))
    assert [a.step() for _ in range(30)] == [b.step() for _ in range(30)]


def test_population_size_constant():
    cfg = cfg2(population=13, max_generations=5)
    engine = GaEngine(cfg, target_matrix("CNOT"), seed=6)
    while not engine.done:
        engine.step()
        assert len(engine.genomes) == 13
        assert all(len(g) == cfg.size_of_individual for g in engine.genomes)
        assert all(isinstance(gate, GateOp) for g in engine.genomes for gate in g)
