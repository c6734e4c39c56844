"""Key-value run configuration files.

Format: one `key: value` per line, `#` starts a comment. Keys are the
camelCase parameter names echoed in run reports. Unknown keys are rejected;
missing keys take the documented defaults.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Optional

from .engine import DEFAULT_MAX_GENERATIONS
from .errors import ConfigurationError


@dataclass
class RunConfig:
    algo: str = "qeqea"                        # qeqea | ga
    target: str = "CNOT"                       # named target or path to a target file
    number_of_wires: Optional[int] = None      # defaults to the target's wire count
    size_of_individual: int = 3
    size_of_population: int = 5
    probability_of_mutation: float = 0.3
    mutation_range: float = math.pi / 4
    n_meas: int = 1
    max_generations: int = DEFAULT_MAX_GENERATIONS
    target_fitness: float = 0.999
    ga_population: int = 50
    ga_mutation_rate: float = 0.1
    ga_mutation_range: float = math.pi / 8
    ga_structural_rate: float = 0.1
    seed: int = 0
    out_dir: str = "runs"
    checkpoint_every: int = 0                  # 0 disables checkpoints
    workers: int = 1
    verbose_log: bool = False

    def echo(self) -> dict:
        return {_FIELD_TO_KEY[f.name]: getattr(self, f.name) for f in fields(self)}


_KEY_TO_FIELD = {
    "algo": ("algo", str),
    "target": ("target", str),
    "numberOfWires": ("number_of_wires", int),
    "sizeOfIndividual": ("size_of_individual", int),
    "sizeOfPopulation": ("size_of_population", int),
    "probabilityOfMutation": ("probability_of_mutation", float),
    "mutationRange": ("mutation_range", float),
    "nMeas": ("n_meas", int),
    "maxGenerations": ("max_generations", int),
    "targetFitness": ("target_fitness", float),
    "gaPopulation": ("ga_population", int),
    "gaMutationRate": ("ga_mutation_rate", float),
    "gaMutationRange": ("ga_mutation_range", float),
    "gaStructuralRate": ("ga_structural_rate", float),
    "seed": ("seed", int),
    "outDir": ("out_dir", str),
    "checkpointEvery": ("checkpoint_every", int),
    "workers": ("workers", int),
    "verboseLog": ("verbose_log", lambda v: v.lower() in ("1", "true", "yes")),
}
_FIELD_TO_KEY = {f: k for k, (f, _) in _KEY_TO_FIELD.items()}


def _validate(cfg: RunConfig) -> RunConfig:
    if cfg.algo not in ("qeqea", "ga"):
        raise ConfigurationError(f"algo must be qeqea or ga, got {cfg.algo!r}")
    if not 0.0 <= cfg.probability_of_mutation <= 1.0:
        raise ConfigurationError(
            f"probabilityOfMutation must be in [0, 1], got {cfg.probability_of_mutation}"
        )
    if not 0.0 <= cfg.ga_mutation_rate <= 1.0:
        raise ConfigurationError(
            f"gaMutationRate must be in [0, 1], got {cfg.ga_mutation_rate}"
        )
    if not 0.0 < cfg.target_fitness <= 1.0:
        raise ConfigurationError(
            f"targetFitness must be in (0, 1], got {cfg.target_fitness}"
        )
    if cfg.seed < 0:
        raise ConfigurationError(f"seed must be non-negative, got {cfg.seed}")
    if cfg.max_generations < 1:
        raise ConfigurationError("maxGenerations must be ≥ 1")
    if cfg.workers < 1:
        raise ConfigurationError("workers must be ≥ 1")
    return cfg


def parse_config(path: Path) -> RunConfig:
    """Parse and validate a config file; errors carry line numbers."""
    cfg = RunConfig()
    text = Path(path).read_text()
    updates = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ConfigurationError(f"{path}:{lineno}: expected 'key: value'")
        key, _, value = line.partition(":")
        key = key.strip()
        value = value.strip()
        if key not in _KEY_TO_FIELD:
            raise ConfigurationError(f"{path}:{lineno}: unknown key {key!r}")
        field_name, conv = _KEY_TO_FIELD[key]
        try:
            updates[field_name] = conv(value)
        except ValueError as exc:
            raise ConfigurationError(
                f"{path}:{lineno}: bad value {value!r} for {key}"
            ) from exc
    return _validate(replace(cfg, **updates))


def apply_overrides(cfg: RunConfig, **overrides) -> RunConfig:
    """CLI flags layered over config-file values; None means no override."""
    updates = {k: v for k, v in overrides.items() if v is not None}
    return _validate(replace(cfg, **updates))
