"""Evolutionary synthesis of quantum circuits in the Ising gate model.

Two engines share one gate library and fitness function: a quantum-encoded
evolutionary search whose genome is a bank of qubit angles and qutrit axis
selectors, and a classical genetic-algorithm baseline evolving whole-circuit
genomes.
"""
from .engine import PopulationConfig, QeqeaEngine, run_qeqea
from .errors import ConfigurationError, InvariantViolation
from .fitness import fitness_value, matrix_error_report, target_matrix
from .ga import GaConfig, GaEngine, run_ga
from .gates import Axis, GateOp, compose_gates
from .report import RunReport, parse_circuit_text, render_circuit

__all__ = [
    "Axis",
    "ConfigurationError",
    "GaConfig",
    "GaEngine",
    "GateOp",
    "InvariantViolation",
    "PopulationConfig",
    "QeqeaEngine",
    "RunReport",
    "compose_gates",
    "fitness_value",
    "matrix_error_report",
    "parse_circuit_text",
    "render_circuit",
    "run_ga",
    "run_qeqea",
    "target_matrix",
]

__version__ = "0.1.0"
