"""Shared numeric helpers for the test suite."""

import numpy as np


def random_complex_matrix(rows, cols, rng):
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_hermitian(dim, rng):
    g = random_complex_matrix(dim, dim, rng)
    return (g + g.conj().T) / 2


def random_density(dim, rng):
    g = random_complex_matrix(dim, dim, rng)
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unit_vector(dim, rng):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)
