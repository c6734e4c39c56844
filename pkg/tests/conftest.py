import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random unitary via QR of a complex Gaussian matrix."""
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


class FakeRng:
    """Deterministic stand-in for numpy Generator in branch-forcing tests."""

    def __init__(self, randoms=(), integer_values=(), uniforms=()):
        self._randoms = list(randoms)
        self._integers = list(integer_values)
        self._uniforms = list(uniforms)

    def random(self, *a, **k):
        return self._randoms.pop(0)

    def integers(self, *a, **k):
        v = self._integers.pop(0)
        return np.asarray(v) if isinstance(v, (list, tuple)) else v

    def uniform(self, low=0.0, high=1.0, *a, **k):
        if self._uniforms:
            return self._uniforms.pop(0)
        return low
