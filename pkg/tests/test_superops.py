import numpy as np
import pytest

from floqlind.superops import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    LindbladForm,
    frobenius_distance,
    hermiticity_defect,
    lindblad_commutator,
    lindblad_to_superop,
    superop_to_quasi_lindblad,
    trace_defect,
    vec,
)

D_ZERO = np.zeros((3, 3))


def test_static_coherent_generator_matrix():
    # H = sigma_z / 2, no dissipation -> diag(0, -i, i, 0)
    form = LindbladForm(SIGMA_Z / 2.0, D_ZERO)
    expected = np.diag([0.0, -1.0j, 1.0j, 0.0])
    assert np.max(np.abs(lindblad_to_superop(form) - expected)) < 1e-14


def test_null_generator_is_zero_matrix():
    form = LindbladForm(np.zeros((2, 2)), D_ZERO)
    assert np.max(np.abs(lindblad_to_superop(form))) == 0.0


def test_pure_drive_generator_matrix():
    # i L_1 for L_1 = -i (E/2) [sigma_x, .]
    e = 1.7
    form = LindbladForm(0.5 * e * SIGMA_X, D_ZERO)
    a = 1j * lindblad_to_superop(form)
    expected = 0.5 * e * np.array(
        [[0, -1, 1, 0], [-1, 0, 0, 1], [1, 0, 0, -1], [0, 1, -1, 0]], dtype=complex
    )
    assert np.max(np.abs(a - expected)) < 1e-14


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError, match="Kossakowski"):
        LindbladForm(np.zeros((2, 2)), np.zeros((4, 4)))


def test_generator_annihilates_trace():
    from helpers import random_hermitian_unit_trace, random_valid_form

    rng = np.random.default_rng(11)
    form = random_valid_form(rng)
    s = lindblad_to_superop(form)
    for _ in range(100):
        rho = random_hermitian_unit_trace(rng)
        image = (s @ vec(rho)).reshape(2, 2)
        assert abs(np.trace(image)) < 1e-12
    assert trace_defect(s) < 1e-12


def test_quasi_lindblad_round_trip_valid_forms():
    from helpers import random_valid_form

    rng = np.random.default_rng(23)
    for _ in range(100):
        form = random_valid_form(rng)
        s = lindblad_to_superop(form)
        back = superop_to_quasi_lindblad(s)
        assert np.max(np.abs(back.hamiltonian - form.hamiltonian)) < 1e-10
        assert np.max(np.abs(back.kossakowski - form.kossakowski)) < 1e-10
        assert np.max(np.abs(lindblad_to_superop(back) - s)) < 1e-10


def test_quasi_lindblad_round_trip_indefinite_forms():
    from helpers import random_quasi_form

    rng = np.random.default_rng(5)
    for _ in range(50):
        form = random_quasi_form(rng)
        s = lindblad_to_superop(form)
        back = superop_to_quasi_lindblad(s)
        assert np.max(np.abs(lindblad_to_superop(back) - s)) < 1e-10


def test_quasi_lindblad_static_limit():
    # diag(0, -i, i, 0) -> H = sigma_z / 2, d = 0
    form = superop_to_quasi_lindblad(np.diag([0.0, -1.0j, 1.0j, 0.0]))
    assert np.max(np.abs(form.hamiltonian - SIGMA_Z / 2.0)) < 1e-12
    assert np.max(np.abs(form.kossakowski)) < 1e-12


def test_quasi_lindblad_zero_matrix():
    form = superop_to_quasi_lindblad(np.zeros((4, 4)))
    assert np.max(np.abs(form.hamiltonian)) < 1e-14
    assert np.max(np.abs(form.kossakowski)) < 1e-14


def test_quasi_lindblad_rejects_non_hermiticity_preserving():
    s = 1j * np.diag([0.0, -1.0j, 1.0j, 0.0])   # i x generator breaks Hermiticity
    with pytest.raises(ValueError, match="Hermiticity-preserving"):
        superop_to_quasi_lindblad(s)
    defect, at = hermiticity_defect(s)
    assert defect > 0.1
    assert at in [(0, 1), (1, 0)]


def test_commutator_model_example():
    # [L_0, L_1] for the driven qubit: H_a = (E/2) sigma_y and the stated d_a
    gamma, e = 0.01, 1.3
    d_static = gamma * np.array([[1, 1j, 0], [-1j, 1, 0], [0, 0, 0]])
    l0 = LindbladForm(SIGMA_Z / 2.0, d_static)
    l1 = LindbladForm(0.5 * e * SIGMA_X, D_ZERO)
    result = lindblad_commutator(l0, l1)
    assert np.max(np.abs(result.hamiltonian - 0.5 * e * SIGMA_Y)) < 1e-14
    d_a = gamma * e * np.array([[0, 0, -1j], [0, 0, -1], [1j, -1, 0]])
    assert np.max(np.abs(result.kossakowski - d_a)) < 1e-14


def test_commutator_self_is_zero():
    from helpers import random_quasi_form

    rng = np.random.default_rng(3)
    form = random_quasi_form(rng)
    result = lindblad_commutator(form, form)
    assert np.max(np.abs(result.hamiltonian)) < 1e-12
    assert np.max(np.abs(result.kossakowski)) < 1e-12


def test_commutator_matches_matrix_commutator():
    from helpers import random_quasi_form

    rng = np.random.default_rng(17)
    for _ in range(50):
        a = random_quasi_form(rng)
        b = random_quasi_form(rng)
        structured = lindblad_to_superop(lindblad_commutator(a, b))
        sa, sb = lindblad_to_superop(a), lindblad_to_superop(b)
        assert frobenius_distance(structured, sa @ sb - sb @ sa) < 1e-10


def test_commutator_antisymmetry():
    from helpers import random_quasi_form

    rng = np.random.default_rng(29)
    a, b = random_quasi_form(rng), random_quasi_form(rng)
    ab = lindblad_commutator(a, b)
    ba = lindblad_commutator(b, a)
    assert np.max(np.abs(ab.hamiltonian + ba.hamiltonian)) < 1e-12
    assert np.max(np.abs(ab.kossakowski + ba.kossakowski)) < 1e-12


def test_commutator_jacobi_identity():
    from helpers import random_quasi_form

    rng = np.random.default_rng(41)
    for _ in range(10):
        a, b, c = (random_quasi_form(rng) for _ in range(3))
        total = np.zeros((4, 4), dtype=complex)
        for x, y, z in [(a, b, c), (b, c, a), (c, a, b)]:
            total += lindblad_to_superop(lindblad_commutator(x, lindblad_commutator(y, z)))
        assert np.max(np.abs(total)) < 1e-9


def test_frobenius_distance_basics():
    x = np.arange(16.0).reshape(4, 4)
    assert frobenius_distance(x, x) == 0.0
    assert frobenius_distance(np.zeros((4, 4)), np.eye(4)) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        frobenius_distance(np.eye(4), np.eye(9))


def test_is_valid_lindblad_is_psd_test():
    from helpers import random_valid_form

    rng = np.random.default_rng(13)
    assert random_valid_form(rng).is_valid_lindblad()
    indefinite = LindbladForm(SIGMA_Z, np.diag([1.0, 1.0, -0.1]))
    assert not indefinite.is_valid_lindblad()


def test_qutrit_round_trip_and_commutator_fallback():
    # N = 3 uses the normalized Gell-Mann basis and the matrix-commutator
    # fallback of the structured commutator
    from helpers import random_quasi_form

    rng = np.random.default_rng(59)
    for _ in range(5):
        form = random_quasi_form(rng, n=3)
        s = lindblad_to_superop(form)
        back = superop_to_quasi_lindblad(s)
        assert np.max(np.abs(lindblad_to_superop(back) - s)) < 1e-9
    a = random_quasi_form(rng, n=3)
    b = random_quasi_form(rng, n=3)
    structured = lindblad_to_superop(lindblad_commutator(a, b))
    sa, sb = lindblad_to_superop(a), lindblad_to_superop(b)
    assert frobenius_distance(structured, sa @ sb - sb @ sa) < 1e-8
