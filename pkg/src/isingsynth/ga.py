"""Classical genetic-algorithm baseline: circuit-level genomes, two-point
crossover, stochastic universal sampling, constant-rate parametric mutation
with occasional structural redraws, and single-elite carryover."""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Tuple

import numpy as np

from . import encoding
from .errors import ConfigurationError
from .fitness import TargetSpec, fitness_value
from .gates import Axis, GateOp, compose_gates
from .linalg import ComplexMatrix

CircuitGenome = Tuple[GateOp, ...]


@dataclass(frozen=True)
class GaConfig:
    number_of_wires: int
    size_of_individual: int
    population: int = 50
    mutation_rate: float = 0.1
    mutation_range: float = math.pi / 8
    structural_rate: float = 0.1  # fraction of mutation events that redraw the gate identity
    max_generations: int = 10_000_000
    target_fitness: float = 0.999

    def __post_init__(self):
        if self.number_of_wires < 2:
            raise ConfigurationError("numberOfWires must be ≥ 2")
        if self.size_of_individual < 1:
            raise ConfigurationError("sizeOfIndividual must be ≥ 1")
        if self.population < 2:
            raise ConfigurationError("GA population must be ≥ 2")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ConfigurationError("mutation rate must be in [0, 1]")
        if not 0.0 <= self.structural_rate <= 1.0:
            raise ConfigurationError("structural rate must be in [0, 1]")
        if not 0.0 < self.target_fitness <= 1.0:
            raise ConfigurationError("targetFitness must be in (0, 1]")

    @property
    def gate_choices(self) -> List[GateOp]:
        """One prototype per legal gate identity (theta unset)."""
        protos = [
            GateOp(kind="rotation", theta=0.0, wire=w, axis=Axis(a))
            for w in range(1, self.number_of_wires + 1)
            for a in range(3)
        ]
        protos += [
            GateOp(kind="interaction", theta=0.0, pair=p)
            for p in combinations(range(1, self.number_of_wires + 1), 2)
        ]
        return protos


def _with_theta(proto: GateOp, theta: float) -> GateOp:
    if proto.kind == "rotation":
        return GateOp(kind="rotation", theta=theta, wire=proto.wire, axis=proto.axis)
    return GateOp(kind="interaction", theta=theta, pair=proto.pair)


def random_genome(cfg: GaConfig, rng: np.random.Generator) -> CircuitGenome:
    choices = cfg.gate_choices
    return tuple(
        _with_theta(choices[int(rng.integers(len(choices)))], encoding.random_angle(rng))
        for _ in range(cfg.size_of_individual)
    )


def decode_genome(genome: CircuitGenome, number_of_wires: int) -> ComplexMatrix:
    """Same composition convention and code path as the quantum engine."""
    return compose_gates(genome, number_of_wires)


def two_point_crossover(
    a: CircuitGenome, b: CircuitGenome, rng: np.random.Generator
) -> Tuple[CircuitGenome, CircuitGenome]:
    """Swap the middle slice [p, q); degenerate cuts reproduce the parents."""
    if len(a) != len(b):
        raise ConfigurationError("crossover requires equal genome lengths")
    if len(a) < 2:
        return a, b
    p, q = sorted(rng.integers(0, len(a) + 1, size=2))
    child_a = a[:p] + b[p:q] + a[q:]
    child_b = b[:p] + a[p:q] + b[q:]
    return child_a, child_b


def sus_select(
    fitnesses: List[float], count: int, rng: np.random.Generator
) -> List[int]:
    """Stochastic universal sampling: equally spaced pointers, one offset.

    Falls back to uniform draws when every fitness is zero.
    """
    total = float(np.sum(fitnesses))
    if total <= 0.0:
        return [int(rng.integers(len(fitnesses))) for _ in range(count)]
    spacing = total / count
    pointer = rng.uniform(0.0, spacing)
    picks: List[int] = []
    cumulative = 0.0
    index = 0
    for _ in range(count):
        while index < len(fitnesses) - 1 and cumulative + fitnesses[index] <= pointer:
            cumulative += fitnesses[index]
            index += 1
        picks.append(index)
        pointer += spacing
    return picks


def ga_mutate(
    genome: CircuitGenome, cfg: GaConfig, rng: np.random.Generator
) -> CircuitGenome:
    """Per-gene Bernoulli mutation: small angle alteration, or with
    structural_rate a uniform redraw of the gate identity (theta kept)."""
    genes = list(genome)
    choices: Optional[List[GateOp]] = None
    for i, gene in enumerate(genes):
        if rng.random() >= cfg.mutation_rate:
            continue
        if rng.random() < cfg.structural_rate:
            if choices is None:
                choices = cfg.gate_choices
            genes[i] = _with_theta(choices[int(rng.integers(len(choices)))], gene.theta)
        else:
            theta = (
                gene.theta + rng.uniform(-cfg.mutation_range, cfg.mutation_range)
            ) % encoding.TWO_PI
            genes[i] = _with_theta(gene, theta)
    return tuple(genes)


class GaEngine:
    """Generational GA loop with the same step interface as the quantum engine."""

    algorithm = "ga"

    def __init__(self, cfg: GaConfig, target: TargetSpec, seed: int, workers: int = 1):
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
        self.genomes = [random_genome(cfg, self.rng) for _ in range(cfg.population)]
        self.generation = 0
        self.best_fitness = 0.0
        self.best_gates: List[GateOp] = []
        self.stop_reason: Optional[str] = None

    def step(self) -> Tuple[float, float]:
        cfg = self.cfg
        fitnesses = [
            fitness_value(decode_genome(g, cfg.number_of_wires), self.target.matrix)
            for g in self.genomes
        ]
        elite_index = int(np.argmax(fitnesses))
        if fitnesses[elite_index] > self.best_fitness:
            self.best_fitness = fitnesses[elite_index]
            self.best_gates = list(self.genomes[elite_index])

        parents = sus_select(fitnesses, cfg.population, self.rng)
        next_pop: List[CircuitGenome] = [self.genomes[elite_index]]
        pair_at = 0
        while len(next_pop) < cfg.population:
            pa = self.genomes[parents[pair_at % len(parents)]]
            pb = self.genomes[parents[(pair_at + 1) % len(parents)]]
            pair_at += 2
            ca, cb = two_point_crossover(pa, pb, self.rng)
            next_pop.append(ga_mutate(ca, cfg, self.rng))
            if len(next_pop) < cfg.population:
                next_pop.append(ga_mutate(cb, cfg, self.rng))
        self.genomes = next_pop

        self.generation += 1
        if self.best_fitness >= cfg.target_fitness:
            self.stop_reason = "target-reached"
        elif self.generation >= cfg.max_generations:
            self.stop_reason = "generation-limit"
        return max(fitnesses), float(np.mean(fitnesses))

    @property
    def done(self) -> bool:
        return self.stop_reason is not None

    def config_echo(self) -> dict:
        cfg = self.cfg
        return {
            "numberOfWires": cfg.number_of_wires,
            "sizeOfIndividual": cfg.size_of_individual,
            "gaPopulation": cfg.population,
            "gaMutationRate": cfg.mutation_rate,
            "gaMutationRange": cfg.mutation_range,
            "gaStructuralRate": cfg.structural_rate,
            "maxGenerations": cfg.max_generations,
            "targetFitness": cfg.target_fitness,
        }

    def close(self) -> None:
        pass


def run_ga(cfg: GaConfig, target: TargetSpec, seed: int, workers: int = 1):
    from .report import run_engine

    return run_engine(GaEngine(cfg, target, seed, workers=workers))
