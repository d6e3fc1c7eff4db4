"""Shared test utilities: random Lindblad forms and gamma-order extraction."""

import numpy as np

from floqlind.models import FourierSeries, static_qubit_generator
from floqlind.superops import SIGMA_X, LindbladForm, hamiltonian_superop


def random_hermitian(rng, n):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return m + m.conj().T


def random_traceless_hermitian(rng, n):
    h = random_hermitian(rng, n)
    return h - np.trace(h) / n * np.eye(n)


def random_quasi_form(rng, n=2):
    """Hermitian H and Hermitian (generally indefinite) Kossakowski matrix."""
    return LindbladForm(
        hamiltonian=random_traceless_hermitian(rng, n),
        kossakowski=random_hermitian(rng, n * n - 1),
    )


def random_valid_form(rng, n=2):
    """Random Lindblad form with a positive semidefinite Kossakowski matrix."""
    a = rng.normal(size=(n * n - 1, n * n - 1)) + 1j * rng.normal(size=(n * n - 1, n * n - 1))
    return LindbladForm(
        hamiltonian=random_traceless_hermitian(rng, n),
        kossakowski=a @ a.conj().T,
    )


def random_hermitian_unit_trace(rng, n=2):
    rho = random_hermitian(rng, n)
    return rho / np.trace(rho).real


def qubit_series(gamma, drive_e):
    """Fourier components of the driven qubit at phi = 0, valid for any real
    gamma (used by the gamma-polynomial extraction below)."""
    drive = hamiltonian_superop(SIGMA_X)
    comps = {0: static_qubit_generator(gamma)}
    if drive_e:
        comps[1] = 0.5 * drive_e * drive
        comps[-1] = 0.5 * drive_e * drive
    return FourierSeries(n_max=1 if drive_e else 0, components=comps)


def gamma_linear_part(values_at, g0=0.25):
    """Exact linear-in-gamma coefficient of a matrix-valued cubic polynomial
    in gamma with vanishing constant term.

    ``values_at(gamma)`` is sampled at +/- g0 and +/- 2 g0; the stencil
    (8 p(g) - 8 p(-g) - p(2g) + p(-2g)) / (12 g) kills the quadratic and
    cubic terms exactly.
    """
    p1, m1 = values_at(g0), values_at(-g0)
    p2, m2 = values_at(2 * g0), values_at(-2 * g0)
    return (8.0 * p1 - 8.0 * m1 - p2 + m2) / (12.0 * g0)
