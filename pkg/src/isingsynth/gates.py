"""Ising-model primitive gates and full-width segment expansion.

Gate set: single-wire rotations Rx/Ry/Rz(θ) and the diagonal two-wire ZZ
interaction J_ij(θ) = exp(-i(θ/2)·Z_i Z_j), built by elementwise exponentiation
of a precomputed ±1 diagonal template (never via swap-gate routing).

Wire convention: wire 1 is the leftmost (most significant) Kronecker factor.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache
from itertools import combinations
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import ConfigurationError
from .linalg import ComplexMatrix, identity

_PAULI = {
    0: np.array([[0, 1], [1, 0]], dtype=np.complex128),
    1: np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    2: np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


class Axis(IntEnum):
    X = 0
    Y = 1
    Z = 2

    @property
    def label(self) -> str:
        return "xyz"[self.value]

    @classmethod
    def from_label(cls, label: str) -> "Axis":
        return cls("xyz".index(label.lower()))


@dataclass(frozen=True)
class InteractionTemplate:
    """±1 diagonal of Z_i Z_j expanded to the full circuit width.

    signs[k] is +1 when bits i and j of basis index k agree, -1 otherwise.
    """

    pair: Tuple[int, int]  # 1-based wire indices, i < j
    signs: np.ndarray      # shape (2**n,), entries ±1

    def __post_init__(self):
        i, j = self.pair
        if not 1 <= i < j:
            raise ConfigurationError(f"invalid wire pair {self.pair}")


def rotation_gate(axis: Axis, theta: float) -> ComplexMatrix:
    """2×2 rotation cos(θ/2)·I − i·sin(θ/2)·σ_axis."""
    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)
    return c * np.eye(2, dtype=np.complex128) - 1j * s * _PAULI[int(axis)]


def pair_signs(pair: Tuple[int, int], number_of_wires: int) -> np.ndarray:
    """The Z_i Z_j diagonal as a ±1 vector over the 2^n basis states."""
    i, j = pair
    k = np.arange(2 ** number_of_wires)
    bit_i = (k >> (number_of_wires - i)) & 1
    bit_j = (k >> (number_of_wires - j)) & 1
    return np.where(bit_i == bit_j, 1, -1)


def enumerate_templates(number_of_wires: int) -> list[InteractionTemplate]:
    """All C(n, 2) interaction templates in lexicographic pair order.

    Call once before evolution starts; templates are immutable thereafter.
    """
    if number_of_wires < 2:
        raise ConfigurationError(
            f"need at least 2 wires for interactions, got {number_of_wires}"
        )
    return [
        InteractionTemplate(pair, pair_signs(pair, number_of_wires))
        for pair in combinations(range(1, number_of_wires + 1), 2)
    ]


def interaction_diagonal(template: InteractionTemplate, theta: float) -> np.ndarray:
    """Diagonal of J_ij(θ) as a vector: entry k = exp(-i·θ·signs[k]/2)."""
    return np.exp(-0.5j * theta * template.signs)


def interaction_gate(template: InteractionTemplate, theta: float) -> ComplexMatrix:
    """Dense diagonal matrix of J_ij(θ), built by elementwise exponentiation."""
    return np.diag(interaction_diagonal(template, theta))


def expand_rotation(
    axis: Axis, theta: float, wire: int, number_of_wires: int
) -> ComplexMatrix:
    """Embed a single-wire rotation at `wire` into the 2^n circuit width."""
    if not 1 <= wire <= number_of_wires:
        raise ConfigurationError(
            f"wire {wire} out of range 1..{number_of_wires}"
        )
    g = rotation_gate(axis, theta)
    left = 2 ** (wire - 1)
    right = 2 ** (number_of_wires - wire)
    if left > 1:
        g = np.kron(np.eye(left, dtype=np.complex128), g)
    if right > 1:
        g = np.kron(g, np.eye(right, dtype=np.complex128))
    return g


@dataclass(frozen=True)
class GateOp:
    """One decoded circuit segment: a rotation or an interaction.

    Shared by both evolutionary engines, the renderer, and serialization so
    that decoding a gate list is bit-identical everywhere.
    """

    kind: str                                # "rotation" | "interaction"
    theta: float
    wire: Optional[int] = None               # rotation only
    axis: Optional[Axis] = None              # rotation only
    pair: Optional[Tuple[int, int]] = None   # interaction only

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "theta": self.theta}
        if self.kind == "rotation":
            d["wire"] = self.wire
            d["axis"] = self.axis.label
        else:
            d["pair"] = list(self.pair)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "GateOp":
        if d["kind"] == "rotation":
            return cls(
                kind="rotation",
                theta=d["theta"],
                wire=d["wire"],
                axis=Axis.from_label(d["axis"]),
            )
        return cls(kind="interaction", theta=d["theta"], pair=tuple(d["pair"]))


@lru_cache(maxsize=16384)
def _expanded_rotation_cached(
    axis: int, theta: float, wire: int, number_of_wires: int
) -> ComplexMatrix:
    m = expand_rotation(Axis(axis), theta, wire, number_of_wires)
    m.setflags(write=False)
    return m


@lru_cache(maxsize=16384)
def _interaction_diag_cached(
    pair: Tuple[int, int], theta: float, number_of_wires: int
) -> np.ndarray:
    tpl = InteractionTemplate(pair, pair_signs(pair, number_of_wires))
    d = interaction_diagonal(tpl, theta)
    d.setflags(write=False)
    return d


def apply_gate(acc: ComplexMatrix, gate: GateOp, number_of_wires: int) -> ComplexMatrix:
    """Left-multiply the accumulator by the expanded gate matrix.

    Interactions take the diagonal fast path (row scaling instead of matmul).
    """
    if gate.kind == "rotation":
        m = _expanded_rotation_cached(
            int(gate.axis), gate.theta, gate.wire, number_of_wires
        )
        return m @ acc
    d = _interaction_diag_cached(gate.pair, gate.theta, number_of_wires)
    return d[:, None] * acc


def compose_gates(gates: Sequence[GateOp], number_of_wires: int) -> ComplexMatrix:
    """Decode an ordered gate list to its circuit unitary.

    Position 0 is applied first to the state, i.e. it is the rightmost factor.
    """
    acc = identity(2 ** number_of_wires)
    for gate in gates:
        acc = apply_gate(acc, gate, number_of_wires)
    return acc
