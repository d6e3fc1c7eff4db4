import math

import numpy as np
import pytest
from scipy.special import jv

from floqlind.expansions import magnus_order, vanvleck_micromotion_exponent
from floqlind.models import (
    FourierSeries,
    ModelParams,
    driven_qubit,
    fourier_components,
    propagate,
    static_qubit_generator,
)
from floqlind.rotating_frame import (
    chi,
    drive_superop,
    frame_superop,
    frame_superop_inverse,
    frame_transform_components,
    frame_unitary,
    gauge_transform,
    nu_sum,
    rotating_generator,
    rotfr_components_analytic,
    rotfr_components_bessel_matrix,
    rotfr_magnus1,
    rotfr_magnus1_kossakowski_eigs,
    rotfr_magnus2,
    rotfr_magnus2_closed_form,
)
from floqlind.superops import superop_to_quasi_lindblad

P = ModelParams(gamma=0.01, drive_e=1.0, omega=1.3)


def test_frame_is_unitary_conjugation():
    for t in np.linspace(0.0, P.period, 9):
        u = frame_unitary(P, t)
        assert np.max(np.abs(u @ u.conj().T - np.eye(2))) < 1e-14
        lam = frame_superop(P, t)
        sv = np.linalg.svd(lam, compute_uv=False)
        assert np.max(np.abs(sv - 1.0)) < 1e-10
        assert np.max(np.abs(lam @ frame_superop_inverse(P, t) - np.eye(4))) < 1e-12
    assert chi(P, 0.0) == 0.0


def test_frames_coincide_at_stroboscopic_times():
    for nu in (0, 1, 2):
        lam = frame_superop(P, nu * P.period)
        assert np.max(np.abs(lam - np.eye(4))) < 1e-12


def test_component_routes_agree():
    for e in np.linspace(0.2, 2.0, 5):
        for omega in np.linspace(0.5, 3.0, 5):
            p = ModelParams(gamma=0.01, drive_e=float(e), omega=float(omega))
            analytic = rotfr_components_analytic(p, 8).components
            bessel = rotfr_components_bessel_matrix(p, 8).components
            for n in range(-8, 9):
                delta = np.linalg.norm(analytic.component(n) - bessel.component(n))
                assert delta < 1e-10


def test_components_match_numeric_fourier_transform():
    series = rotfr_components_analytic(P, 8).components
    dft = fourier_components(rotating_generator(P), 8, samples=256)
    for n in range(-8, 9):
        assert np.max(np.abs(series.component(n) - dft.component(n))) < 1e-10


def test_component_reflection_symmetry():
    series = rotfr_components_analytic(P, 7).components
    for n in range(0, 8):
        lhs = series.component(-n)
        rhs = (-1) ** n * series.component(n)
        assert np.max(np.abs(lhs - rhs)) < 1e-14


def test_component_parity_selectors():
    # even/odd harmonics populate complementary entry sets of the 4x4 matrix
    series = rotfr_components_analytic(P, 5).components
    odd_mask = np.array(
        [[0, 1, 1, 0], [1, 0, 0, 1], [1, 0, 0, 1], [0, 1, 1, 0]], dtype=bool
    )
    for n in (1, 3, 5):
        comp = series.component(n)
        assert np.max(np.abs(comp[~odd_mask])) < 1e-14
        assert np.max(np.abs(comp)) > 0
    for n in (2, 4):
        comp = series.component(n)
        assert np.max(np.abs(comp[odd_mask])) < 1e-14


def test_zero_drive_recovers_static_generator():
    p = ModelParams(gamma=0.07, drive_e=0.0, omega=1.3)
    series = rotfr_components_analytic(p, 4).components
    assert np.max(np.abs(series.component(0) - static_qubit_generator(p.gamma))) < 1e-14
    for n in range(1, 5):
        assert np.max(np.abs(series.component(n))) < 1e-14


def test_static_component_matrix_in_j0_and_g():
    # L~_0 expressed through J_0(z) and g(z) = (1 - J_0(2z)) / 2 alone
    g0 = 0.5 * (1.0 - jv(0, 2 * P.z))
    j0 = jv(0, P.z)
    gam = P.gamma
    expected = np.array(
        [
            [-gam * (2 * j0 + 2 - g0), 0, 0, -gam * (2 * j0 - 2 + g0)],
            [0, -1j * j0 - gam * (2 + g0), gam * g0, 0],
            [0, gam * g0, 1j * j0 - gam * (2 + g0), 0],
            [gam * (2 * j0 + 2 - g0), 0, 0, gam * (2 * j0 - 2 + g0)],
        ],
        dtype=complex,
    )
    series = rotfr_components_analytic(P, 2).components
    assert np.max(np.abs(series.component(0) - expected)) < 1e-14


def test_bessel_sum_identities():
    for z in (0.1, 1.0, 3.8, 10.0):
        ks = np.arange(-(int(z) + 40), int(z) + 41)
        jk = jv(ks, z)
        assert abs(np.sum(jk ** 2) - 1.0) < 1e-12
        g_sum = np.sum(jk[ks % 2 != 0] ** 2)
        assert abs(g_sum - 0.5 * (1.0 - jv(0, 2 * z))) < 1e-12


def test_first_order_rotating_magnus_is_lindblad_everywhere():
    for e in np.linspace(0.0, 3.0, 12):
        for omega in np.linspace(0.3, 3.0, 12):
            p = ModelParams(gamma=0.01, drive_e=float(e), omega=float(omega))
            form = superop_to_quasi_lindblad(rotfr_magnus1(p).generator)
            assert form.is_valid_lindblad()


def test_first_order_kossakowski_eigenvalues_closed_form():
    for e, omega in [(0.5, 1.1), (2.0, 0.7), (1.3, 3.0)]:
        p = ModelParams(gamma=0.01, drive_e=e, omega=omega)
        form = superop_to_quasi_lindblad(rotfr_magnus1(p).generator)
        got = np.sort(np.linalg.eigvalsh(form.kossakowski))
        assert np.max(np.abs(got - rotfr_magnus1_kossakowski_eigs(p))) < 1e-12


def test_first_order_static_limit_spectrum():
    p = ModelParams(gamma=0.05, drive_e=0.0, omega=1.0)
    eigs = rotfr_magnus1_kossakowski_eigs(p)
    assert np.max(np.abs(np.sort(eigs) - np.array([0.0, 0.0, 2.0 * p.gamma]))) < 1e-14
    form = superop_to_quasi_lindblad(rotfr_magnus1(p).generator)
    static = superop_to_quasi_lindblad(static_qubit_generator(p.gamma))
    assert np.max(np.abs(form.kossakowski - static.kossakowski)) < 1e-14


def test_third_kossakowski_eigenvalue_at_bessel_minimum():
    # 2z = 3.8317 sits at the global minimum of J_0, where
    # lambda_3 = gamma (1 - J_0(2z)) / 2 exceeds gamma / 2
    omega = 1.0
    p = ModelParams(gamma=0.01, drive_e=3.8317 / 4.0 * omega, omega=omega)
    lam3 = 0.5 * p.gamma * (1.0 - jv(0, 2.0 * p.z))
    assert lam3 > 0.5 * p.gamma
    eigs = rotfr_magnus1_kossakowski_eigs(p)
    assert min(abs(eigs - lam3)) < 1e-15


def test_second_order_magnus_matches_generic_formula():
    for e, omega in [(0.6, 1.1), (1.5, 0.8)]:
        p = ModelParams(gamma=0.01, drive_e=e, omega=omega)
        n_max = math.ceil(p.z) + 25
        series = rotfr_components_analytic(p, n_max).components
        generic = magnus_order(series, p.omega, 2).generator
        assert np.max(np.abs(rotfr_magnus2(p, n_max).generator - generic)) < 1e-9


def _components_linear_in_gamma(gamma, e, omega, n_max):
    """Rotating-frame components extended to arbitrary real gamma via their
    exact linearity in gamma."""
    at0 = rotfr_components_analytic(ModelParams(0.0, e, omega), n_max).components
    at1 = rotfr_components_analytic(ModelParams(1.0, e, omega), n_max).components
    comps = {
        n: at0.component(n) + gamma * (at1.component(n) - at0.component(n))
        for n in range(-n_max, n_max + 1)
    }
    return FourierSeries(n_max=n_max, components=comps)


def test_second_order_magnus_closed_form_is_the_gamma_linear_part():
    from helpers import gamma_linear_part

    e, omega = 0.9, 1.4
    n_max = 30

    def kossakowski(gamma):
        series = _components_linear_in_gamma(gamma, e, omega, n_max)
        l0 = series.component(0)
        gen = l0.copy()
        for n in range(1, n_max + 1, 2):
            l_n = series.component(n)
            gen += 2.0 * (l0 @ (1j * l_n) - (1j * l_n) @ l0) / (n * omega)
        return superop_to_quasi_lindblad(gen).kossakowski

    d1 = gamma_linear_part(kossakowski, g0=0.2)
    _, d_ref = rotfr_magnus2_closed_form(ModelParams(1.0, e, omega))
    assert np.max(np.abs(d1 - d_ref)) < 1e-10
    h, _ = rotfr_magnus2_closed_form(ModelParams(0.01, e, omega))
    z = 2.0 * e / omega
    sx_coeff = np.trace(h @ np.array([[0, 1], [1, 0]])).real / 2.0
    assert sx_coeff == pytest.approx(-jv(0, z) * nu_sum(z) / omega, abs=1e-14)


def test_second_order_small_z_matches_direct_frame_hamiltonian():
    # nu(z) ~ z/2 for small z, so the sigma_x coefficient of H_Mag,2
    # reduces to the -eps/omega term of the direct-frame expansion
    p = ModelParams(gamma=0.01, drive_e=0.05, omega=2.0)
    h, _ = rotfr_magnus2_closed_form(p)
    coeff = np.trace(h @ np.array([[0, 1], [1, 0]])).real / 2.0
    assert abs(coeff - (-p.eps / p.omega)) < p.z ** 3


def test_second_order_sweep_shows_non_lindbladian_lobe():
    p_inside = ModelParams(gamma=0.01, drive_e=0.6, omega=1.3)
    form = superop_to_quasi_lindblad(rotfr_magnus2(p_inside).generator)
    assert not form.is_valid_lindblad()
    # strong driving sits outside the lobe
    p_outside = ModelParams(gamma=0.01, drive_e=3.0, omega=2.0)
    form = superop_to_quasi_lindblad(rotfr_magnus2(p_outside).generator)
    assert form.is_valid_lindblad()


def test_gauge_transform_identity_is_noop():
    gen = driven_qubit(P)
    eye = lambda t: np.eye(4, dtype=complex)
    transformed = gauge_transform(gen, eye, eye)
    for t in np.linspace(0.0, P.period, 5):
        assert np.max(np.abs(transformed.eval_at(t) - gen.eval_at(t))) < 1e-12


def test_gauge_transform_into_rotating_frame():
    gen = driven_qubit(P)
    transformed = gauge_transform(
        gen,
        lambda t: frame_superop(P, t),
        lambda t: frame_superop_inverse(P, t),
    )
    rot = rotating_generator(P)
    for t in np.linspace(0.0, P.period, 9):
        assert np.max(np.abs(transformed.eval_at(t) - rot.eval_at(t))) < 1e-8


def test_gauge_transform_keeps_stroboscopic_map():
    gen = driven_qubit(P)
    transformed = gauge_transform(
        gen,
        lambda t: frame_superop(P, t),
        lambda t: frame_superop_inverse(P, t),
    )
    p_direct = propagate(gen, 0.0, P.period, 600)
    p_rot = propagate(transformed, 0.0, P.period, 600)
    assert np.max(np.abs(p_direct - p_rot)) < 1e-7


def test_gauge_transform_rejects_inconsistent_inverse():
    gen = driven_qubit(P)
    with pytest.raises(ValueError, match="inverse"):
        gauge_transform(gen, lambda t: np.eye(4), lambda t: 2.0 * np.eye(4))


def test_product_formula_matches_direct_bessel_components():
    lam = frame_transform_components({1: 1.0 + 0j, -1: 1.0 + 0j},
                                     drive_superop(P), P.omega, 6)
    a = 0.5 * P.drive_e * (np.kron(np.array([[0, 1], [1, 0]]), np.eye(2))
                           - np.kron(np.eye(2), np.array([[0, 1], [1, 0]])))
    evals, u = np.linalg.eigh(a)
    for n in range(-6, 7):
        direct = (u * jv(n, -2.0 * evals / P.omega)) @ u.conj().T
        assert np.max(np.abs(lam[n] - direct)) < 1e-12


def test_micromotion_first_harmonic_vanishes_at_quarter_period():
    series = rotfr_components_analytic(P, 9).components
    exponent = vanvleck_micromotion_exponent(series, P.omega, 1)

    def n1_part(t):
        return (np.exp(1j * P.omega * t) * exponent.component(1)
                + np.exp(-1j * P.omega * t) * exponent.component(-1))

    assert np.max(np.abs(n1_part(P.period / 4.0))) < 1e-12
    assert np.max(np.abs(n1_part(0.0))) > 1e-3


def test_analytic_route_rejects_nonzero_phase():
    p = ModelParams(gamma=0.01, drive_e=1.0, omega=1.3, phi=0.4)
    with pytest.raises(ValueError, match="phi"):
        rotfr_components_analytic(p, 4)
    with pytest.raises(ValueError, match="phi"):
        rotfr_components_bessel_matrix(p, 4)


def test_nu_sum_leading_order():
    assert nu_sum(1e-4) == pytest.approx(0.5e-4, rel=1e-6)


def test_rotating_effective_generator_second_order_vanishes():
    # [L~_n, L~_-n] = 0 because L~_-n = (-1)^n L~_n, so the second-order
    # effective generator equals the first
    from floqlind.expansions import vanvleck_keff

    series = rotfr_components_analytic(P, 12).components
    k1 = vanvleck_keff(series, P.omega, 1).generator
    k2 = vanvleck_keff(series, P.omega, 2).generator
    assert np.max(np.abs(k2 - k1)) < 1e-13
