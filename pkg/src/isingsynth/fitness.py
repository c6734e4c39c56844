"""Trace-fidelity fitness and the library of benchmark target unitaries."""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigurationError
from .linalg import ComplexMatrix, is_unitary

_PERMUTATION_TARGETS = {
    # name -> (wires, output bit function on (bit tuple, msb first))
    "CNOT": (2, lambda b: (b[0], b[1] ^ b[0])),
    "Toffoli": (3, lambda b: (b[0], b[1], b[2] ^ (b[0] & b[1]))),
    "Peres": (3, lambda b: (b[0], b[1] ^ b[0], b[2] ^ (b[0] & b[1]))),
    "CCCNOT": (4, lambda b: (b[0], b[1], b[2], b[3] ^ (b[0] & b[1] & b[2]))),
}


@dataclass(frozen=True)
class TargetSpec:
    name: str
    number_of_wires: int
    matrix: ComplexMatrix


@dataclass(frozen=True)
class ErrorReport:
    max_abs_error: float
    mean_abs_error: float
    fitness: float


def fitness_value(s: ComplexMatrix, t: ComplexMatrix) -> float:
    """1 − sqrt((size − |tr(S†T)|)/size), clamped to [0, 1].

    Global-phase invariant through the complex modulus of the trace; equals 1
    iff S matches T up to a phase.
    """
    if s.shape != t.shape or s.shape[0] != s.shape[1]:
        raise ConfigurationError(
            f"fitness dimension mismatch: {s.shape} vs {t.shape}"
        )
    size = s.shape[0]
    overlap = abs(np.sum(s.conj() * t))  # == |tr(S†T)|
    radicand = max(0.0, (size - overlap) / size)
    return min(1.0, max(0.0, 1.0 - math.sqrt(radicand)))


def _permutation_matrix(number_of_wires: int, bit_fn) -> ComplexMatrix:
    dim = 2 ** number_of_wires
    m = np.zeros((dim, dim), dtype=np.complex128)
    for col in range(dim):
        bits = tuple((col >> (number_of_wires - 1 - w)) & 1 for w in range(number_of_wires))
        out = bit_fn(bits)
        row = 0
        for b in out:
            row = (row << 1) | b
        m[row, col] = 1.0
    return m


def target_matrix(name: str, number_of_wires: int | None = None) -> TargetSpec:
    """Look up a named benchmark target, or load one from a file path.

    Wire 1 is the most significant basis bit, matching the gate expansion
    convention.
    """
    if name in _PERMUTATION_TARGETS:
        wires, fn = _PERMUTATION_TARGETS[name]
        if number_of_wires is not None and number_of_wires != wires:
            raise ConfigurationError(
                f"target {name} needs numberOfWires={wires}, got {number_of_wires}"
            )
        return TargetSpec(name, wires, _permutation_matrix(wires, fn))
    path = Path(name)
    if path.exists():
        return load_target_file(path, number_of_wires)
    raise ConfigurationError(f"unknown target {name!r} (not a name or a file)")


def load_target_file(path: Path, number_of_wires: int | None = None) -> TargetSpec:
    """Parse a custom target: first line n, then 2^n rows of `re+imj` entries."""
    lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    try:
        wires = int(lines[0])
    except (IndexError, ValueError) as exc:
        raise ConfigurationError(f"{path}: first line must be the wire count") from exc
    if number_of_wires is not None and wires != number_of_wires:
        raise ConfigurationError(
            f"{path}: file wire count {wires} != configured {number_of_wires}"
        )
    dim = 2 ** wires
    if len(lines) != dim + 1:
        raise ConfigurationError(f"{path}: expected {dim} matrix rows, got {len(lines) - 1}")
    rows = []
    for i, ln in enumerate(lines[1:], start=2):
        entries = ln.split()
        if len(entries) != dim:
            raise ConfigurationError(f"{path}:{i}: expected {dim} entries, got {len(entries)}")
        try:
            rows.append([complex(e) for e in entries])
        except ValueError as exc:
            raise ConfigurationError(f"{path}:{i}: unparsable complex entry") from exc
    m = np.array(rows, dtype=np.complex128)
    dev = float(np.abs(m.conj().T @ m - np.eye(dim)).max())
    if dev >= 1e-9:
        raise ConfigurationError(
            f"{path}: matrix is not unitary (max deviation of U†U from I: {dev:.3e})"
        )
    return TargetSpec(str(path), wires, m)


def write_target_file(path: Path, spec: TargetSpec) -> None:
    dim = spec.matrix.shape[0]
    with open(path, "w") as fh:
        fh.write(f"{spec.number_of_wires}\n")
        for r in range(dim):
            fh.write(
                " ".join(
                    f"{v.real:+.17g}{v.imag:+.17g}j" for v in spec.matrix[r]
                )
                + "\n"
            )


def matrix_error_report(s: ComplexMatrix, t: ComplexMatrix) -> ErrorReport:
    """Entry-magnitude error summary between a synthesized and target matrix."""
    if s.shape != t.shape:
        raise ConfigurationError(f"error report dimension mismatch: {s.shape} vs {t.shape}")
    diffs = np.abs(np.abs(s) - np.abs(t))
    return ErrorReport(
        max_abs_error=float(diffs.max()),
        mean_abs_error=float(diffs.mean()),
        fitness=fitness_value(s, t),
    )


def target_is_valid(spec: TargetSpec) -> bool:
    return is_unitary(spec.matrix, 1e-9)
