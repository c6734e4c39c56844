"""Quantum-encoded evolutionary engine.

One shared bank of qubit angles and qutrit axis selectors encodes every
candidate segment. Each generation: measure the qutrits to fix rotation axes,
sample circuits by drawing (individual, slot-kind) pairs per position, score
them against the target, fold scores into the per-position segment fitness
table, then adaptively mutate the bank with elitist accept/reject.

Layout: the flat qubit index of slot (k, i, p) is
    k · sizeOfIndividual · sizeOfPopulation + i · sizeOfIndividual + p
with slot kinds ordered rotations-by-wire first, then interaction templates.
The first numberOfWires · sizeOfPopulation · sizeOfIndividual indices form the
rotation region, whose slots share their flat index with their qutrit.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Set, Tuple

import numpy as np

from . import encoding
from .errors import ConfigurationError
from .fitness import TargetSpec, fitness_value
from .gates import Axis, GateOp, InteractionTemplate, apply_gate, enumerate_templates
from .linalg import ComplexMatrix, identity

DEFAULT_MAX_GENERATIONS = 10_000_000


@dataclass(frozen=True)
class PopulationConfig:
    number_of_wires: int
    size_of_individual: int
    size_of_population: int
    probability_of_mutation: float = 0.3
    mutation_range: float = math.pi / 4
    n_meas: int = 1
    max_generations: int = DEFAULT_MAX_GENERATIONS
    target_fitness: float = 0.999
    memory_cap_entries: int = 2 ** 26  # dense 2^n × 2^n must fit under this

    def __post_init__(self):
        if self.number_of_wires < 2:
            raise ConfigurationError("numberOfWires must be ≥ 2")
        if self.size_of_individual < 1 or self.size_of_population < 1:
            raise ConfigurationError("sizeOfIndividual and sizeOfPopulation must be ≥ 1")
        if not 0.0 <= self.probability_of_mutation <= 1.0:
            raise ConfigurationError("probabilityOfMutation must be in [0, 1]")
        if self.mutation_range <= 0.0:
            raise ConfigurationError("mutationRange must be > 0")
        if self.n_meas < 1:
            raise ConfigurationError("nMeas must be ≥ 1")
        if self.max_generations < 1:
            raise ConfigurationError("maxGenerations must be ≥ 1")
        if not 0.0 < self.target_fitness <= 1.0:
            raise ConfigurationError("targetFitness must be in (0, 1]")
        if (2 ** self.number_of_wires) ** 2 > self.memory_cap_entries:
            raise ConfigurationError(
                f"numberOfWires={self.number_of_wires} exceeds the dense-matrix memory cap"
            )

    @property
    def template_count(self) -> int:
        n = self.number_of_wires
        return n * (n - 1) // 2

    @property
    def slot_kind_count(self) -> int:
        return self.number_of_wires + self.template_count

    @property
    def qubit_count(self) -> int:
        return self.slot_kind_count * self.size_of_population * self.size_of_individual

    @property
    def qutrit_count(self) -> int:
        return self.number_of_wires * self.size_of_population * self.size_of_individual

    def flat_index(self, slot_kind: int, individual: int, position: int) -> int:
        return (
            slot_kind * self.size_of_individual * self.size_of_population
            + individual * self.size_of_individual
            + position
        )

    def decode_flat(self, flat: int) -> Tuple[int, int, int]:
        """Inverse of flat_index: flat → (slot_kind, individual, position)."""
        per_kind = self.size_of_individual * self.size_of_population
        slot_kind, rest = divmod(flat, per_kind)
        individual, position = divmod(rest, self.size_of_individual)
        return slot_kind, individual, position


@dataclass
class PopulationState:
    """The flat bank of evolved angles and qutrit amplitudes."""

    thetas: np.ndarray   # shape (qubit_count,), angles in [0, 2π)
    qutrits: np.ndarray  # shape (qutrit_count, 3), complex amplitudes


def init_population(cfg: PopulationConfig, rng: np.random.Generator) -> PopulationState:
    """Angles uniform on [0, 2π); qutrits uniform on the state sphere."""
    thetas = rng.uniform(0.0, encoding.TWO_PI, size=cfg.qubit_count)
    amps = rng.normal(size=(cfg.qutrit_count, 3)) + 1j * rng.normal(
        size=(cfg.qutrit_count, 3)
    )
    qutrits = amps / np.linalg.norm(amps, axis=1, keepdims=True)
    return PopulationState(thetas=thetas, qutrits=qutrits)


class SegmentBank:
    """Per-generation decoded segments: measured axes plus angle snapshot.

    Expanded unitaries are produced lazily through the shared gate cache, so a
    generation only pays for the segments its sampled circuits reference.
    """

    def __init__(
        self,
        cfg: PopulationConfig,
        templates: List[InteractionTemplate],
        thetas: np.ndarray,
        axes: np.ndarray,
    ):
        self.cfg = cfg
        self.templates = templates
        self.thetas = thetas
        self.axes = axes

    def descriptor(self, flat: int) -> GateOp:
        cfg = self.cfg
        slot_kind, _, _ = cfg.decode_flat(flat)
        theta = float(self.thetas[flat])
        if slot_kind < cfg.number_of_wires:
            return GateOp(
                kind="rotation",
                theta=theta,
                wire=slot_kind + 1,
                axis=Axis(int(self.axes[flat])),
            )
        template = self.templates[slot_kind - cfg.number_of_wires]
        return GateOp(kind="interaction", theta=theta, pair=template.pair)

    def unitary(self, flat: int) -> ComplexMatrix:
        return apply_gate(
            identity(2 ** self.cfg.number_of_wires),
            self.descriptor(flat),
            self.cfg.number_of_wires,
        )


def construct_segments(
    pop: PopulationState,
    cfg: PopulationConfig,
    templates: List[InteractionTemplate],
    rng: np.random.Generator,
) -> SegmentBank:
    """Measure every rotation slot's qutrit and snapshot the angle bank.

    Axis estimation is a plurality vote over n_meas Born-rule draws per slot,
    vectorized across the whole rotation region.
    """
    probs = np.abs(pop.qutrits) ** 2
    probs /= probs.sum(axis=1, keepdims=True)
    counts = rng.multinomial(cfg.n_meas, probs)
    axes = np.argmax(counts, axis=1)  # ties break toward the lower axis index
    return SegmentBank(cfg, templates, pop.thetas.copy(), axes)


def sample_circuit(cfg: PopulationConfig, rng: np.random.Generator) -> np.ndarray:
    """Draw one blueprint: a flat segment index per circuit position."""
    length = cfg.size_of_individual
    which_individual = rng.integers(cfg.size_of_population, size=length)
    which_kind = rng.integers(cfg.slot_kind_count, size=length)
    positions = np.arange(length)
    return (
        which_kind * length * cfg.size_of_population
        + which_individual * length
        + positions
    )


def evaluate_circuit(
    blueprint: np.ndarray, bank: SegmentBank, target: ComplexMatrix
) -> float:
    """Compose the blueprint (position 0 applied first) and score it."""
    n = bank.cfg.number_of_wires
    if target.shape[0] != 2 ** n:
        raise ConfigurationError(
            f"target dimension {target.shape[0]} != 2^{n}"
        )
    acc = identity(2 ** n)
    for flat in blueprint:
        acc = apply_gate(acc, bank.descriptor(int(flat)), n)
    return fitness_value(acc, target)


class SegmentFitnessTable:
    """Best-so-far circuit fitness per (segment flat index, circuit position)."""

    def __init__(self, cfg: PopulationConfig):
        self.cfg = cfg
        self.entries: Dict[Tuple[int, int], float] = {}
        # Per-slot max over positions, the scalar used for mutation scaling.
        self.slot_max = np.zeros(cfg.qubit_count)

    def update(self, blueprint: np.ndarray, fit: float) -> Set[int]:
        """Elitist keep-best merge; returns the flat slots that improved."""
        improved: Set[int] = set()
        for position, flat in enumerate(blueprint):
            flat = int(flat)
            key = (flat, position)
            if fit > self.entries.get(key, 0.0):
                self.entries[key] = fit
                improved.add(flat)
            if fit > self.slot_max[flat]:
                self.slot_max[flat] = fit
        return improved


Snapshot = Tuple[float, Optional[np.ndarray]]


def mutate_population(
    pop: PopulationState,
    table: SegmentFitnessTable,
    cfg: PopulationConfig,
    rng: np.random.Generator,
) -> Dict[int, Snapshot]:
    """Adaptively mutate each slot in place with probabilityOfMutation.

    A fair coin picks angle vs. qutrit mutation; interaction-region slots have
    no qutrit and fall back to angle mutation. The perturbation scale shrinks
    with the slot's best recorded fitness. Returns pre-mutation snapshots of
    every touched slot for the elitist accept/reject at the next generation.
    """
    mutate_mask = rng.random(cfg.qubit_count) < cfg.probability_of_mutation
    qutrit_coin = rng.random(cfg.qubit_count) < 0.5
    rotation_region = cfg.qutrit_count
    snapshots: Dict[int, Snapshot] = {}
    for flat in np.nonzero(mutate_mask)[0]:
        flat = int(flat)
        seg_fitness = float(table.slot_max[flat])
        if seg_fitness >= 1.0:
            continue  # zero-magnitude perturbation either way
        has_qutrit = flat < rotation_region
        snapshots[flat] = (
            float(pop.thetas[flat]),
            pop.qutrits[flat].copy() if has_qutrit else None,
        )
        if qutrit_coin[flat] and has_qutrit:
            pop.qutrits[flat] = encoding.mutate_qutrit(
                pop.qutrits[flat], seg_fitness, rng
            )
        else:
            pop.thetas[flat] = encoding.mutate_angle(
                pop.thetas[flat], seg_fitness, cfg.mutation_range, rng
            )
    return snapshots


class QeqeaEngine:
    """Stepwise generation loop; picklable for checkpoint/resume."""

    algorithm = "qeqea"

    def __init__(
        self,
        cfg: PopulationConfig,
        target: TargetSpec,
        seed: int,
        workers: int = 1,
    ):
        if target.matrix.shape[0] != 2 ** cfg.number_of_wires:
            raise ConfigurationError(
                f"target {target.name} dimension {target.matrix.shape[0]} "
                f"!= 2^{cfg.number_of_wires}"
            )
        if seed < 0:
            raise ConfigurationError("seed must be non-negative")
        self.cfg = cfg
        self.target = target
        self.seed = int(seed)
        self.workers = max(1, int(workers))
        self.rng = np.random.default_rng(seed)
        self.templates = enumerate_templates(cfg.number_of_wires)
        self.pop = init_population(cfg, self.rng)
        self.table = SegmentFitnessTable(cfg)
        self.pending: Dict[int, Snapshot] = {}
        self.generation = 0
        self.best_fitness = 0.0
        self.best_gates: List[GateOp] = []
        self.stop_reason: Optional[str] = None
        self._executor: Optional[ThreadPoolExecutor] = None

    # Executors are not picklable; rebuild on demand after a resume.
    def __getstate__(self):
        state = self.__dict__.copy()
        state["_executor"] = None
        return state

    def _pool(self) -> ThreadPoolExecutor:
        if self._executor is None:
            self._executor = ThreadPoolExecutor(max_workers=self.workers)
        return self._executor

    def _circuit_stream(self, index: int) -> np.random.Generator:
        # Stream identity depends only on (seed, generation, task index), so
        # parallel and sequential execution sample identical circuits.
        return np.random.default_rng(
            np.random.SeedSequence([self.seed, self.generation, index])
        )

    def step(self) -> Tuple[float, float]:
        """Run one generation; returns (generation best, generation mean)."""
        cfg = self.cfg
        bank = construct_segments(self.pop, cfg, self.templates, self.rng)
        blueprints = [
            sample_circuit(cfg, self._circuit_stream(c))
            for c in range(cfg.size_of_population)
        ]
        if self.workers > 1:
            fitnesses = list(
                self._pool().map(
                    lambda bp: evaluate_circuit(bp, bank, self.target.matrix),
                    blueprints,
                )
            )
        else:
            fitnesses = [
                evaluate_circuit(bp, bank, self.target.matrix) for bp in blueprints
            ]

        improved: Set[int] = set()
        for bp, fit in zip(blueprints, fitnesses):
            improved |= self.table.update(bp, fit)
            if fit > self.best_fitness:
                self.best_fitness = fit
                self.best_gates = [bank.descriptor(int(f)) for f in bp]

        # Elitist accept/reject: discard last generation's mutations on slots
        # whose table entries saw no improvement from this generation's circuits.
        for flat, (theta, qutrit) in self.pending.items():
            if flat not in improved:
                self.pop.thetas[flat] = theta
                if qutrit is not None:
                    self.pop.qutrits[flat] = qutrit
        self.pending = mutate_population(self.pop, self.table, cfg, self.rng)

        self.generation += 1
        if self.best_fitness >= cfg.target_fitness:
            self.stop_reason = "target-reached"
        elif self.generation >= cfg.max_generations:
            self.stop_reason = "generation-limit"
        gen_best = max(fitnesses)
        gen_mean = float(np.mean(fitnesses))
        return gen_best, gen_mean

    @property
    def done(self) -> bool:
        return self.stop_reason is not None

    def config_echo(self) -> dict:
        cfg = self.cfg
        return {
            "numberOfWires": cfg.number_of_wires,
            "sizeOfIndividual": cfg.size_of_individual,
            "sizeOfPopulation": cfg.size_of_population,
            "probabilityOfMutation": cfg.probability_of_mutation,
            "mutationRange": cfg.mutation_range,
            "nMeas": cfg.n_meas,
            "maxGenerations": cfg.max_generations,
            "targetFitness": cfg.target_fitness,
            "workers": self.workers,
        }

    def close(self) -> None:
        if self._executor is not None:
            self._executor.shutdown()
            self._executor = None


def run_qeqea(
    cfg: PopulationConfig, target: TargetSpec, seed: int, workers: int = 1
):
    """Convenience wrapper returning a RunReport for a full evolution run."""
    from .report import run_engine

    return run_engine(QeqeaEngine(cfg, target, seed, workers=workers))
