"""Run reports, generation logs, and circuit text rendering."""
from __future__ import annotations

import json
import re
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

from .gates import Axis, GateOp


@dataclass(frozen=True)
class GenerationRecord:
    generation: int
    best_fitness: float   # best-so-far, monotone non-decreasing
    mean_fitness: float
    elapsed_ms: float

    def to_dict(self) -> dict:
        return {
            "generation": self.generation,
            "bestFitness": self.best_fitness,
            "meanFitness": self.mean_fitness,
            "elapsedMs": self.elapsed_ms,
        }


@dataclass
class RunReport:
    algorithm: str
    config: dict
    seed: int
    target: str
    records: List[GenerationRecord] = field(default_factory=list)
    best_gates: List[GateOp] = field(default_factory=list)
    final_fitness: float = 0.0
    stop_reason: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "config": self.config,
            "seed": self.seed,
            "target": self.target,
            "records": [r.to_dict() for r in self.records],
            "bestCircuit": [g.to_dict() for g in self.best_gates],
            "bestCircuitText": render_circuit(self.best_gates),
            "finalFitness": self.final_fitness,
            "stopReason": self.stop_reason,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "RunReport":
        return cls(
            algorithm=d["algorithm"],
            config=d["config"],
            seed=d["seed"],
            target=d["target"],
            records=[
                GenerationRecord(
                    r["generation"], r["bestFitness"], r["meanFitness"], r["elapsedMs"]
                )
                for r in d["records"]
            ],
            best_gates=[GateOp.from_dict(g) for g in d["bestCircuit"]],
            final_fitness=d["finalFitness"],
            stop_reason=d["stopReason"],
        )

    @classmethod
    def load(cls, path: Path) -> "RunReport":
        return cls.from_dict(json.loads(Path(path).read_text()))


def render_circuit(gates: List[GateOp]) -> str:
    """Concatenated gate tokens, e.g. R1y(θ=1.570796)J12(θ=4.712389)."""
    tokens = []
    for g in gates:
        if g.kind == "rotation":
            tokens.append(f"R{g.wire}{g.axis.label}(θ={g.theta:.6f})")
        else:
            i, j = g.pair
            tokens.append(f"J{i}{j}(θ={g.theta:.6f})")
    return "".join(tokens)


_TOKEN_RE = re.compile(
    r"R(?P<wire>\d+)(?P<axis>[xyz])\(θ=(?P<rtheta>[0-9.]+)\)"
    r"|J(?P<i>\d)(?P<j>\d)\(θ=(?P<jtheta>[0-9.]+)\)"
)


def parse_circuit_text(text: str) -> List[GateOp]:
    """Inverse of render_circuit (angles at 6-decimal precision)."""
    gates: List[GateOp] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ValueError(f"unparsable circuit text at offset {pos}: {text[pos:pos+20]!r}")
        if m.group("wire") is not None:
            gates.append(
                GateOp(
                    kind="rotation",
                    theta=float(m.group("rtheta")),
                    wire=int(m.group("wire")),
                    axis=Axis.from_label(m.group("axis")),
                )
            )
        else:
            gates.append(
                GateOp(
                    kind="interaction",
                    theta=float(m.group("jtheta")),
                    pair=(int(m.group("i")), int(m.group("j"))),
                )
            )
        pos = m.end()
    return gates


def run_engine(
    engine,
    log_fh=None,
    checkpoint_fn=None,
    checkpoint_every: int = 0,
    report: Optional[RunReport] = None,
) -> RunReport:
    """Drive an engine's step() loop to completion, collecting a RunReport.

    `log_fh`, when given, receives one line-delimited JSON record per
    generation. `checkpoint_fn(engine, report)` fires every
    `checkpoint_every` generations. Passing an existing `report` continues it
    (checkpoint resume).
    """
    if report is None:
        report = RunReport(
            algorithm=engine.algorithm,
            config=engine.config_echo() if hasattr(engine, "config_echo") else {},
            seed=engine.seed,
            target=engine.target.name,
        )
    start = time.monotonic()
    while not engine.done:
        _, gen_mean = engine.step()
        elapsed_ms = (time.monotonic() - start) * 1000.0
        record = GenerationRecord(
            generation=engine.generation,
            best_fitness=engine.best_fitness,
            mean_fitness=gen_mean,
            elapsed_ms=elapsed_ms,
        )
        report.records.append(record)
        if log_fh is not None:
            log_fh.write(json.dumps(record.to_dict()) + "\n")
        if checkpoint_fn is not None and checkpoint_every > 0:
            if engine.generation % checkpoint_every == 0:
                checkpoint_fn(engine, report)
    report.best_gates = list(engine.best_gates)
    report.final_fitness = engine.best_fitness
    report.stop_reason = engine.stop_reason
    engine.close()
    return report
