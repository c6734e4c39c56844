import json
import math
from pathlib import Path

import numpy as np
import pytest

from isingsynth.cli import main
from isingsynth.config import RunConfig, apply_overrides, parse_config
from isingsynth.engine import QeqeaEngine
from isingsynth.errors import ConfigurationError
from isingsynth.ga import GaEngine
from isingsynth.gates import Axis, GateOp
from isingsynth.harness import (
    ALL_CONVENTIONS,
    REFERENCE_CNOT_CIRCUIT,
    build_engine,
    compare_runs,
    convention_sweep,
    format_comparison,
    format_sweep,
    resume_experiment,
    run_experiment,
)
from isingsynth.report import (
    GenerationRecord,
    RunReport,
    parse_circuit_text,
    render_circuit,
    run_engine,
)


# --- rendering -----------------------------------------------------------

def test_render_circuit_exact_text():
    gates = [
        GateOp(kind="rotation", theta=math.pi / 2, wire=1, axis=Axis.Y),
        GateOp(kind="interaction", theta=3 * math.pi / 2, pair=(1, 2)),
        GateOp(kind="rotation", theta=3 * math.pi / 2, wire=1, axis=Axis.X),
    ]
    assert render_circuit(gates) == (
        "R1y(θ=1.570796)J12(θ=4.712389)R1x(θ=4.712389)"
    )


def test_render_parse_round_trip(rng):
    gates = [
        GateOp(kind="rotation", theta=0.123456, wire=3, axis=Axis.Z),
        GateOp(kind="interaction", theta=5.5, pair=(2, 3)),
        GateOp(kind="rotation", theta=6.0, wire=1, axis=Axis.X),
    ]
    parsed = parse_circuit_text(render_circuit(gates))
    assert len(parsed) == 3
    for original, back in zip(gates, parsed):
        assert (back.kind, back.wire, back.axis, back.pair) == (
            original.kind, original.wire, original.axis, original.pair
        )
        assert back.theta == pytest.approx(original.theta, abs=5e-7)
    with pytest.raises(ValueError):
        parse_circuit_text("Q1x(θ=1.0)")


def test_report_json_round_trip():
    report = RunReport(
        algorithm="qeqea",
        config={"sizeOfIndividual": 3},
        seed=7,
        target="CNOT",
        records=[GenerationRecord(1, 0.5, 0.25, 10.0)],
        best_gates=[GateOp(kind="rotation", theta=1.0, wire=1, axis=Axis.X)],
        final_fitness=0.5,
        stop_reason="generation-limit",
    )
    loaded = RunReport.from_dict(json.loads(report.to_json()))
    assert loaded == report


def test_run_engine_log_and_monotone_records(tmp_path):
    cfg = RunConfig(
        algo="ga", target="CNOT", max_generations=30, size_of_individual=4
    )
    engine = build_engine(cfg)
    log = tmp_path / "gen.log"
    with open(log, "w") as fh:
        report = run_engine(engine, log_fh=fh)
    assert len(report.records) == 30
    bests = [r.best_fitness for r in report.records]
    assert bests == sorted(bests)
    lines = log.read_text().splitlines()
    assert len(lines) == 30
    first = json.loads(lines[0])
    assert set(first) == {"generation", "bestFitness", "meanFitness", "elapsedMs"}


# --- config files --------------------------------------------------------

def test_parse_config_defaults_and_values(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(
        "# demo config\n"
        "algo: ga\n"
        "target: Toffoli\n"
        "sizeOfIndividual: 16   # inline comment\n"
        "probabilityOfMutation: 0.25\n"
        "seed: 11\n"
    )
    cfg = parse_config(path)
    assert cfg.algo == "ga"
    assert cfg.target == "Toffoli"
    assert cfg.size_of_individual == 16
    assert cfg.probability_of_mutation == 0.25
    assert cfg.seed == 11
    # untouched keys keep defaults
    assert cfg.ga_population == 50
    assert cfg.workers == 1


def test_parse_config_rejects_unknown_key(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("sizeofindividual: 3\n")
    with pytest.raises(ConfigurationError, match="bad.cfg:1"):
        parse_config(path)


def test_parse_config_rejects_bad_values(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("probabilityOfMutation: 1.5\n")
    with pytest.raises(ConfigurationError, match="probabilityOfMutation"):
        parse_config(path)
    path.write_text("maxGenerations: soon\n")
    with pytest.raises(ConfigurationError, match="bad value"):
        parse_config(path)
    path.write_text("just some words\n")
    with pytest.raises(ConfigurationError, match="key: value"):
        parse_config(path)


def test_apply_overrides_layering():
    cfg = RunConfig(seed=3)
    out = apply_overrides(cfg, seed=9, target=None)
    assert out.seed == 9
    assert out.target == "CNOT"
    with pytest.raises(ConfigurationError):
        apply_overrides(cfg, algo="annealing")


def test_config_echo_uses_camel_case_keys():
    echo = RunConfig().echo()
    assert echo["sizeOfIndividual"] == 3
    assert echo["probabilityOfMutation"] == pytest.approx(0.3)
    assert "gaMutationRate" in echo


# --- experiments, checkpoints, resume ------------------------------------

def test_build_engine_dispatch():
    assert isinstance(build_engine(RunConfig(algo="qeqea")), QeqeaEngine)
    assert isinstance(build_engine(RunConfig(algo="ga")), GaEngine)
    # wire count defaults to the target's
    engine = build_engine(RunConfig(algo="qeqea", target="Toffoli"))
    assert engine.cfg.number_of_wires == 3


def test_run_experiment_outputs(tmp_path):
    cfg = RunConfig(
        algo="qeqea",
        target="CNOT",
        max_generations=50,
        seed=2,
        out_dir=str(tmp_path / "out"),
        checkpoint_every=20,
    )
    report = run_experiment(cfg)
    out = tmp_path / "out"
    assert (out / "report.json").exists()
    assert (out / "summary.txt").exists()
    assert (out / "checkpoint.pkl").exists()
    assert len((out / "generations.log").read_text().splitlines()) == 50
    loaded = RunReport.load(out / "report.json")
    assert loaded.final_fitness == report.final_fitness
    assert "finalFitness" in (out / "summary.txt").read_text()


def test_resume_matches_uninterrupted_run(tmp_path):
    base = dict(
        algo="qeqea",
        target="CNOT",
        seed=13,
        size_of_individual=3,
        size_of_population=5,
    )
    full_dir = tmp_path / "full"
    full = run_experiment(
        RunConfig(max_generations=1000, out_dir=str(full_dir), **base)
    )
    part_dir = tmp_path / "part"
    run_experiment(
        RunConfig(
            max_generations=400,
            out_dir=str(part_dir),
            checkpoint_every=400,
            **base,
        )
    )
    resumed = resume_experiment(part_dir / "checkpoint.pkl", max_generations=1000)
    assert resumed.final_fitness == full.final_fitness
    assert resumed.best_gates == full.best_gates
    assert len(resumed.records) == len(full.records)
    assert [r.best_fitness for r in resumed.records] == [
        r.best_fitness for r in full.records
    ]


def test_resume_missing_checkpoint(tmp_path):
    with pytest.raises(IOError):
        resume_experiment(tmp_path / "nope.pkl")


# --- diagnostics ---------------------------------------------------------

def test_convention_sweep_shape_and_frozen_best():
    rows = convention_sweep()
    assert len(rows) == 16
    assert len(ALL_CONVENTIONS) == 8
    for row in rows:
        assert 0.0 <= row["fitness"] <= 1.0
    best = max(r["fitness"] for r in rows)
    # Regression pin: the reference circuit never exceeds 1 − sqrt(1/2) under
    # any of the 16 convention/control combinations.
    assert best == pytest.approx(1.0 - math.sqrt(0.5), abs=1e-9)
    text = format_sweep(rows)
    assert "best: 0.292893" in text


def test_reference_circuit_definition():
    kinds = [g.kind for g in REFERENCE_CNOT_CIRCUIT]
    assert kinds == ["rotation", "interaction", "rotation"]
    assert REFERENCE_CNOT_CIRCUIT[1].theta == pytest.approx(3 * math.pi / 2)


def test_compare_runs_validation_and_format():
    r1 = RunReport("qeqea", {}, 1, "CNOT", [], [], 0.4, "generation-limit")
    r2 = RunReport("ga", {}, 1, "CNOT", [], [], 0.99, "target-reached")
    comparison = compare_runs([r1, r2])
    assert comparison["target"] == "CNOT"
    assert [row["algorithm"] for row in comparison["rows"]] == ["qeqea", "ga"]
    text = format_comparison(comparison)
    assert "qeqea" in text and "ga" in text
    with pytest.raises(ConfigurationError):
        compare_runs([r1])
    r3 = RunReport("ga", {}, 1, "Toffoli", [], [], 0.5, None)
    with pytest.raises(ConfigurationError):
        compare_runs([r1, r3])


# --- CLI -----------------------------------------------------------------

def test_cli_run_and_compare(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("algo: ga\ntarget: CNOT\nmaxGenerations: 10\n")
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    assert main(["run", "--config", str(cfg), "--out", str(out_a)]) == 1
    assert main(
        ["run", "--config", str(cfg), "--seed", "5", "--out", str(out_b)]
    ) == 1
    code = main(
        ["compare", str(out_a / "report.json"), str(out_b / "report.json")]
    )
    assert code == 0
    captured = capsys.readouterr()
    assert "target: CNOT" in captured.out


def test_cli_sweep_conventions(capsys):
    assert main(["sweep-conventions"]) == 0
    out = capsys.readouterr().out
    assert out.count("\n") >= 17
    assert "best: 0.292893" in out


def test_cli_config_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("algo: annealing\n")
    assert main(["run", "--config", str(bad)]) == 2
    assert "configuration error" in capsys.readouterr().err


def test_cli_io_error_exit_code(tmp_path, capsys):
    assert main(["resume", str(tmp_path / "missing.pkl")]) == 3
    assert "I/O error" in capsys.readouterr().err


def test_cli_target_reached_exit_code(tmp_path):
    # an easy run that reaches targetFitness quickly: GA on CNOT, long budget
    cfg = tmp_path / "easy.cfg"
    cfg.write_text(
        "algo: ga\n"
        "target: CNOT\n"
        "sizeOfIndividual: 6\n"
        "gaMutationRate: 0.2\n"
        "gaStructuralRate: 0.2\n"
        "maxGenerations: 20000\n"
        "seed: 0\n"
    )
    out = tmp_path / "reached"
    assert main(["run", "--config", str(cfg), "--out", str(out)]) == 0
    report = RunReport.load(out / "report.json")
    assert report.stop_reason == "target-reached"
    assert report.final_fitness >= 0.999
