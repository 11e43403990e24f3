import numpy as np
import pytest


def random_hermitian(rng, dim):
    R = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (R + R.conj().T) / 2


def random_density(rng, dim):
    R = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    M = R @ R.conj().T
    return M / np.trace(M).real


def random_unit_trace_hermitian(rng, dim):
    H = random_hermitian(rng, dim)
    H += (1.0 - np.trace(H).real) / dim * np.eye(dim)
    return H


def random_unit_vector(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
