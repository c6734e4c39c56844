"""Quantum genome units: phase-encoded angle carriers and qutrit axis selectors.

The evolved angle is stored as an exact float in [0, 2π) and read back
deterministically; on physical hardware the same value would have to be
recovered by amplitude estimation, so this module simulates the idealized
behavior. Qutrit measurement samples the Born distribution without collapsing
the stored amplitudes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvariantViolation
from .gates import Axis

TWO_PI = 2.0 * math.pi

# Per-parameter domains of the qutrit mutation operator: three mixing angles
# in (0, π/2) followed by five phases in (0, 2π).
SU3_RANGES = np.array([math.pi / 2] * 3 + [TWO_PI] * 5)


@dataclass(frozen=True)
class SU3Params:
    """Eight parameters of the 3×3 special-unitary mutation operator."""

    theta1: float = 0.0
    theta2: float = 0.0
    theta3: float = 0.0
    phi1: float = 0.0
    phi2: float = 0.0
    phi3: float = 0.0
    phi4: float = 0.0
    phi5: float = 0.0


def read_angle(theta: float) -> float:
    """Deterministic readout of the stored rotation angle."""
    return theta


def mutate_angle(
    theta: float,
    segment_fitness: float,
    mutation_range: float,
    rng: np.random.Generator,
) -> float:
    """Perturb by ±(1 − segmentFitness)·mutationRange, wrapped modulo 2π."""
    sign = 1.0 if rng.random() < 0.5 else -1.0
    return (theta + sign * (1.0 - segment_fitness) * mutation_range) % TWO_PI


def random_angle(rng: np.random.Generator) -> float:
    return rng.uniform(0.0, TWO_PI)


def random_qutrit(rng: np.random.Generator) -> np.ndarray:
    """Uniform draw on the qutrit state sphere (normalized complex Gaussians)."""
    amps = rng.normal(size=3) + 1j * rng.normal(size=3)
    return amps / np.linalg.norm(amps)


def born_probabilities(state: np.ndarray) -> np.ndarray:
    probs = np.abs(state) ** 2
    norm = probs.sum()
    if abs(norm - 1.0) > 1e-6:
        raise InvariantViolation(f"qutrit norm² deviates from 1: {norm}")
    return probs / norm


def measure_qutrit(state: np.ndarray, rng: np.random.Generator) -> Axis:
    """Single Born-rule draw; the stored state is not collapsed."""
    probs = born_probabilities(state)
    return Axis(int(rng.choice(3, p=probs)))


def estimate_axis(state: np.ndarray, n_meas: int, rng: np.random.Generator) -> Axis:
    """Plurality vote over n_meas measurements; ties break toward X < Y < Z."""
    probs = born_probabilities(state)
    counts = rng.multinomial(n_meas, probs)
    return Axis(int(np.argmax(counts)))  # argmax takes the lowest index on ties


def su3_operator(p: SU3Params) -> np.ndarray:
    """The 3×3 special-unitary matrix template used for qutrit mutation."""
    c1, c2, c3 = math.cos(p.theta1), math.cos(p.theta2), math.cos(p.theta3)
    s1, s2, s3 = math.sin(p.theta1), math.sin(p.theta2), math.sin(p.theta3)
    e = np.exp
    f1, f2, f3, f4, f5 = p.phi1, p.phi2, p.phi3, p.phi4, p.phi5
    return np.array(
        [
            [
                e(1j * f1) * c1 * c2,
                e(1j * f3) * s1,
                e(1j * f4) * c1 * s2,
            ],
            [
                e(-1j * f4 - 1j * f5) * s2 * s3
                - e(1j * (f1 + f2 - f3)) * s1 * c2 * c3,
                e(1j * f2) * c1 * c3,
                -e(-1j * f1 - 1j * f5) * c2 * s3
                - e(1j * (f2 - f3 + f4)) * s1 * s2 * c3,
            ],
            [
                -e(-1j * f2 - 1j * f4) * s2 * c3
                - e(1j * (f1 - f3 + f5)) * s1 * c2 * s3,
                e(1j * f5) * c1 * s3,
                e(-1j * f1 - 1j * f2) * c2 * c3
                - e(1j * (-f3 + f4 + f5)) * s1 * s2 * s3,
            ],
        ],
        dtype=np.complex128,
    )


def mutate_qutrit(
    state: np.ndarray, segment_fitness: float, rng: np.random.Generator
) -> np.ndarray:
    """Apply a one-parameter special-unitary rotation scaled by (1 − fitness).

    One of the eight operator parameters is chosen uniformly and drawn from
    its domain shrunk by (1 − segmentFitness); the rest stay zero.
    """
    which = int(rng.integers(8))
    value = rng.uniform(0.0, SU3_RANGES[which] * (1.0 - segment_fitness))
    params = [0.0] * 8
    params[which] = value
    new = su3_operator(SU3Params(*params)) @ state
    return new / np.linalg.norm(new)  # defensive renormalization
