"""Dense complex linear algebra primitives.

Matrices are square numpy arrays of complex128 in row-major semantic order.
All operations are pure; callers may freely share results across workers.
"""
from __future__ import annotations

import numpy as np

from .errors import ConfigurationError, InvariantViolation

ComplexMatrix = np.ndarray


def identity(dim: int) -> ComplexMatrix:
    return np.eye(dim, dtype=np.complex128)


def matmul(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Standard matrix product; dimensions must agree."""
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ConfigurationError(
            f"matmul dimension mismatch: {a.shape} vs {b.shape}"
        )
    return a @ b


def kron(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Kronecker product; result dimension is the product of the inputs'."""
    return np.kron(a, b)


def dagger(a: ComplexMatrix) -> ComplexMatrix:
    return a.conj().T


def trace(a: ComplexMatrix) -> complex:
    return complex(np.trace(a))


def is_unitary(a: ComplexMatrix, tol: float = 1e-9) -> bool:
    """True iff the max-entry norm of A†A − I is below tol."""
    if a.shape[0] != a.shape[1]:
        return False
    dev = a.conj().T @ a - np.eye(a.shape[0])
    return float(np.abs(dev).max()) < tol


def assert_finite(a: ComplexMatrix) -> None:
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise InvariantViolation("non-finite entries in complex matrix")
