"""Experiment orchestration: dispatch, logging, checkpoints, diagnostics."""
from __future__ import annotations

import math
import pickle
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from .config import RunConfig
from .engine import PopulationConfig, QeqeaEngine
from .errors import ConfigurationError
from .fitness import TargetSpec, fitness_value, target_matrix
from .ga import GaConfig, GaEngine
from .gates import Axis, GateOp, pair_signs, rotation_gate
from .report import RunReport, run_engine


def resolve_target(cfg: RunConfig) -> TargetSpec:
    return target_matrix(cfg.target, cfg.number_of_wires)


def build_engine(cfg: RunConfig, target: Optional[TargetSpec] = None):
    spec = target if target is not None else resolve_target(cfg)
    n = spec.number_of_wires
    if cfg.algo == "qeqea":
        pop_cfg = PopulationConfig(
            number_of_wires=n,
            size_of_individual=cfg.size_of_individual,
            size_of_population=cfg.size_of_population,
            probability_of_mutation=cfg.probability_of_mutation,
            mutation_range=cfg.mutation_range,
            n_meas=cfg.n_meas,
            max_generations=cfg.max_generations,
            target_fitness=cfg.target_fitness,
        )
        return QeqeaEngine(pop_cfg, spec, cfg.seed, workers=cfg.workers)
    ga_cfg = GaConfig(
        number_of_wires=n,
        size_of_individual=cfg.size_of_individual,
        population=cfg.ga_population,
        mutation_rate=cfg.ga_mutation_rate,
        mutation_range=cfg.ga_mutation_range,
        structural_rate=cfg.ga_structural_rate,
        max_generations=cfg.max_generations,
        target_fitness=cfg.target_fitness,
    )
    return GaEngine(ga_cfg, spec, cfg.seed, workers=cfg.workers)


def _atomic_write_bytes(path: Path, data: bytes) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_bytes(data)
    tmp.replace(path)


def _write_outputs(out: Path, report: RunReport) -> None:
    (out / "report.json").write_text(report.to_json())
    summary = [
        f"algorithm:    {report.algorithm}",
        f"target:       {report.target}",
        f"seed:         {report.seed}",
        f"generations:  {len(report.records)}",
        f"finalFitness: {report.final_fitness:.6f}",
        f"stopReason:   {report.stop_reason}",
        f"bestCircuit:  {report.to_dict()['bestCircuitText']}",
    ]
    (out / "summary.txt").write_text("\n".join(summary) + "\n")


def run_experiment(cfg: RunConfig) -> RunReport:
    """Run one configured evolution, writing logs, report, and checkpoints."""
    out = Path(cfg.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IOError(f"cannot create output directory {out}: {exc}") from exc

    engine = build_engine(cfg)

    def checkpoint(eng, rep):
        _atomic_write_bytes(
            out / "checkpoint.pkl",
            pickle.dumps({"engine": eng, "report": rep, "config": cfg}),
        )

    with open(out / "generations.log", "w") as log_fh:
        report = run_engine(
            engine,
            log_fh=log_fh,
            checkpoint_fn=checkpoint if cfg.checkpoint_every > 0 else None,
            checkpoint_every=cfg.checkpoint_every,
        )
    _write_outputs(out, report)
    return report


def resume_experiment(
    checkpoint_path: Path, max_generations: Optional[int] = None
) -> RunReport:
    """Continue a checkpointed run; the trajectory matches an uninterrupted
    run because the engine's full RNG state is restored."""
    try:
        state = pickle.loads(Path(checkpoint_path).read_bytes())
    except OSError as exc:
        raise IOError(f"cannot read checkpoint {checkpoint_path}: {exc}") from exc
    engine = state["engine"]
    report: RunReport = state["report"]
    cfg: RunConfig = state["config"]
    if max_generations is not None:
        from dataclasses import replace

        engine.cfg = replace(engine.cfg, max_generations=max_generations)
        if (
            engine.stop_reason == "generation-limit"
            and engine.generation < max_generations
        ):
            engine.stop_reason = None
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    def checkpoint(eng, rep):
        _atomic_write_bytes(
            out / "checkpoint.pkl",
            pickle.dumps({"engine": eng, "report": rep, "config": cfg}),
        )

    with open(out / "generations.log", "a") as log_fh:
        report = run_engine(
            engine,
            log_fh=log_fh,
            checkpoint_fn=checkpoint if cfg.checkpoint_every > 0 else None,
            checkpoint_every=cfg.checkpoint_every,
            report=report,
        )
    _write_outputs(out, report)
    return report


@dataclass(frozen=True)
class ConventionChoice:
    product_order: str  # "first-applied-rightmost" | "first-applied-leftmost"
    wire_order: str     # "wire1-most-significant" | "wire1-least-significant"
    j_sign: str         # "minus" (exp(-iθ/2·ZZ)) | "plus"


ALL_CONVENTIONS = [
    ConventionChoice(po, wo, js)
    for po in ("first-applied-rightmost", "first-applied-leftmost")
    for wo in ("wire1-most-significant", "wire1-least-significant")
    for js in ("minus", "plus")
]

# A circulated reference CNOT circuit: Ry on wire 1 at π/2, interaction (1,2) at
# 3π/2, Rx on wire 1 at 3π/2, in application order.
REFERENCE_CNOT_CIRCUIT = (
    GateOp(kind="rotation", theta=math.pi / 2, wire=1, axis=Axis.Y),
    GateOp(kind="interaction", theta=3 * math.pi / 2, pair=(1, 2)),
    GateOp(kind="rotation", theta=3 * math.pi / 2, wire=1, axis=Axis.X),
)


def _expand_under(gate: GateOp, n: int, conv: ConventionChoice) -> np.ndarray:
    if gate.kind == "rotation":
        wire = gate.wire
        if conv.wire_order == "wire1-least-significant":
            wire = n + 1 - wire
        g = rotation_gate(gate.axis, gate.theta)
        return np.kron(
            np.kron(np.eye(2 ** (wire - 1)), g), np.eye(2 ** (n - wire))
        )
    pair = gate.pair
    if conv.wire_order == "wire1-least-significant":
        pair = tuple(sorted(n + 1 - w for w in pair))
    sign = -0.5j if conv.j_sign == "minus" else 0.5j
    return np.diag(np.exp(sign * gate.theta * pair_signs(pair, n)))


def compose_under(
    gates: Sequence[GateOp], n: int, conv: ConventionChoice
) -> np.ndarray:
    acc = np.eye(2 ** n, dtype=np.complex128)
    ordered = gates if conv.product_order == "first-applied-rightmost" else reversed(gates)
    for gate in ordered:
        acc = _expand_under(gate, n, conv) @ acc
    return acc


def convention_sweep(
    circuit: Sequence[GateOp] = REFERENCE_CNOT_CIRCUIT,
) -> List[dict]:
    """Evaluate a reference CNOT circuit under all 8 convention choices and
    both control-wire assignments; diagnostic only, never silently adopted."""
    targets = {
        "control-wire-1": target_matrix("CNOT").matrix,
        # Control on wire 2: swap the roles of the two basis bits.
        "control-wire-2": np.array(
            [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]],
            dtype=np.complex128,
        ),
    }
    rows = []
    for conv in ALL_CONVENTIONS:
        s = compose_under(circuit, 2, conv)
        for control, t in targets.items():
            rows.append(
                {
                    "productOrder": conv.product_order,
                    "wireOrder": conv.wire_order,
                    "jSign": conv.j_sign,
                    "control": control,
                    "fitness": fitness_value(s, t),
                }
            )
    return rows


def format_sweep(rows: List[dict]) -> str:
    lines = [
        f"{'productOrder':<24} {'wireOrder':<26} {'jSign':<6} {'control':<16} fitness"
    ]
    for r in rows:
        lines.append(
            f"{r['productOrder']:<24} {r['wireOrder']:<26} {r['jSign']:<6} "
            f"{r['control']:<16} {r['fitness']:.6f}"
        )
    best = max(rows, key=lambda r: r["fitness"])
    lines.append(
        f"best: {best['fitness']:.6f} under ({best['productOrder']}, "
        f"{best['wireOrder']}, {best['jSign']}, {best['control']})"
    )
    return "\n".join(lines)


def compare_runs(reports: Sequence[RunReport]) -> dict:
    """Side-by-side accuracy and generation counts for runs on one target."""
    if len(reports) < 2:
        raise ConfigurationError("compare needs at least two run reports")
    targets = {r.target for r in reports}
    if len(targets) != 1:
        raise ConfigurationError(f"cannot compare runs on different targets: {targets}")
    rows = [
        {
            "algorithm": r.algorithm,
            "seed": r.seed,
            "accuracy": r.final_fitness,
            "generations": len(r.records),
            "stopReason": r.stop_reason,
        }
        for r in reports
    ]
    return {"target": targets.pop(), "rows": rows}


def format_comparison(comparison: dict) -> str:
    lines = [
        f"target: {comparison['target']}",
        f"{'algorithm':<10} {'seed':<8} {'accuracy':<10} {'generations':<12} stopReason",
    ]
    for r in comparison["rows"]:
        lines.append(
            f"{r['algorithm']:<10} {r['seed']:<8} {r['accuracy']:<10.4f} "
            f"{r['generations']:<12} {r['stopReason']}"
        )
    return "\n".join(lines)
