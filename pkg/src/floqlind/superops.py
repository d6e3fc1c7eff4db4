"""Operator and superoperator algebra for Lindblad generators.

Conventions used throughout the package:

* Operators on the N-dimensional Hilbert space are dense complex ``(N, N)``
  arrays.  Density matrices are vectorized row by row, so matrix entry
  ``(i, j)`` lands at vector index ``i * N + j``.
* Superoperators are dense complex ``(N**2, N**2)`` arrays acting on these
  vectors.  The map ``rho -> A rho B`` has the matrix ``kron(A, B.T)``.
* A Lindblad form is the pair (H, d) of a traceless Hermitian Hamiltonian and
  a Hermitian Kossakowski matrix in a fixed traceless operator basis.  For
  N = 2 the basis is the bare Pauli matrices (sigma_x, sigma_y, sigma_z); for
  larger N the Hilbert-Schmidt-normalized Gell-Mann matrices.  The generator
  reads

      L(rho) = -i [H, rho] + sum_nm d_nm (F_n rho F_m - {F_m F_n, rho} / 2)

  and generates a completely positive trace-preserving semigroup iff d is
  positive semidefinite (Gorini-Kossakowski-Sudarshan / Lindblad).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

# Absolute tolerances for structural checks.  Eigensolvers on the small
# matrices handled here are accurate to ~1e-13; the 1e-10 margins absorb
# integrator error entering from upstream propagation.
TOL_HERM = 1e-10
TOL_TP = 1e-10
TOL_PSD = 1e-9       # eigenvalues >= -TOL_PSD count as nonnegative
TOL_ROUNDTRIP = 1e-10

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
SIGMA_MINUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
SIGMA_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

# Levi-Civita symbol, used by the structured commutator.
_EPS3 = np.zeros((3, 3, 3))
for _i, _j, _k in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]:
    _EPS3[_i, _j, _k] = 1.0
    _EPS3[_i, _k, _j] = -1.0


def vec(op: np.ndarray) -> np.ndarray:
    """Row-major vectorization: entry (i, j) -> index i*N + j."""
    return np.asarray(op, dtype=complex).reshape(-1)


def unvec(v: np.ndarray) -> np.ndarray:
    """Inverse of :func:`vec` for square operators."""
    v = np.asarray(v)
    n = int(round(np.sqrt(v.size)))
    return v.reshape(n, n)


def sandwich(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Superoperator matrix of ``rho -> a rho b``."""
    return np.kron(a, np.asarray(b).T)


def left_mult(a: np.ndarray) -> np.ndarray:
    """Superoperator matrix of ``rho -> a rho``."""
    n = a.shape[0]
    return np.kron(a, np.eye(n))


def right_mult(b: np.ndarray) -> np.ndarray:
    """Superoperator matrix of ``rho -> rho b``."""
    n = b.shape[0]
    return np.kron(np.eye(n), np.asarray(b).T)


def hamiltonian_superop(h: np.ndarray) -> np.ndarray:
    """Superoperator matrix of the commutator part ``rho -> -i [h, rho]``."""
    return -1j * (left_mult(h) - right_mult(h))


def hermiticity_defect(s: np.ndarray) -> tuple[float, tuple[int, int]]:
    """Largest violation of Hermiticity preservation of a superoperator.

    A map preserves Hermiticity iff it sends every Hermitian operator to a
    Hermitian operator.  Returns the largest entrywise defect over a Hermitian
    operator basis together with the (row, column) matrix element of the worst
    image.
    """
    s = np.asarray(s)
    n = int(round(np.sqrt(s.shape[0])))
    worst = 0.0
    worst_at = (0, 0)
    for basis_op in hermitian_basis(n):
        image = unvec(s @ vec(basis_op))
        defect = image - image.conj().T
        idx = np.unravel_index(np.argmax(np.abs(defect)), defect.shape)
        if abs(defect[idx]) > worst:
            worst = abs(defect[idx])
            worst_at = (int(idx[0]), int(idx[1]))
    return worst, worst_at


def trace_defect(s: np.ndarray) -> float:
    """Norm of the trace functional applied to a generator.

    Zero for generators of trace-preserving evolutions: Tr(L rho) = 0 for
    every rho is equivalent to vec(1)^dag L = 0.
    """
    s = np.asarray(s)
    n = int(round(np.sqrt(s.shape[0])))
    return float(np.linalg.norm(vec(np.eye(n)).conj() @ s))


def hermitian_basis(n: int) -> list[np.ndarray]:
    """Basis of Hermitian n x n matrices (diagonal, symmetric, antisymmetric)."""
    basis = []
    for i in range(n):
        e = np.zeros((n, n), dtype=complex)
        e[i, i] = 1.0
        basis.append(e)
    for i in range(n):
        for j in range(i + 1, n):
            e = np.zeros((n, n), dtype=complex)
            e[i, j] = e[j, i] = 1.0
            basis.append(e)
            f = np.zeros((n, n), dtype=complex)
            f[i, j] = 1.0j
            f[j, i] = -1.0j
            basis.append(f)
    return basis


def traceless_basis(n: int) -> list[np.ndarray]:
    """Traceless Hermitian basis used for Kossakowski matrices.

    For n = 2 the bare Pauli matrices in the order (sigma_x, sigma_y,
    sigma_z).  For n > 2 the generalized Gell-Mann matrices normalized to
    Tr(F_i F_j) = delta_ij.
    """
    if n == 2:
        return [SIGMA_X.copy(), SIGMA_Y.copy(), SIGMA_Z.copy()]
    basis = []
    for i in range(n):
        for j in range(i + 1, n):
            e = np.zeros((n, n), dtype=complex)
            e[i, j] = e[j, i] = 1.0 / np.sqrt(2.0)
            basis.append(e)
            f = np.zeros((n, n), dtype=complex)
            f[i, j] = -1.0j / np.sqrt(2.0)
            f[j, i] = 1.0j / np.sqrt(2.0)
            basis.append(f)
    for k in range(1, n):
        diag = np.zeros(n)
        diag[:k] = 1.0
        diag[k] = -k
        diag /= np.sqrt(k * (k + 1))
        basis.append(np.diag(diag).astype(complex))
    return basis


def lindblad_matrix(h: np.ndarray, d: np.ndarray, basis: list[np.ndarray] | None = None) -> np.ndarray:
    """Superoperator matrix of the (quasi-)Lindblad bilinear form.

    Builds ``-i[h, .] + sum_nm d_nm (F_n . F_m - {F_m F_n, .}/2)`` for
    arbitrary complex ``h`` and ``d``; no Hermiticity is assumed, so the same
    builder serves Fourier components of periodic generators, which are not
    individually of Lindblad form.
    """
    h = np.asarray(h, dtype=complex)
    d = np.asarray(d, dtype=complex)
    n = h.shape[0]
    if basis is None:
        basis = traceless_basis(n)
    if d.shape != (len(basis), len(basis)):
        raise ValueError(
            f"Kossakowski matrix has shape {d.shape}, expected {(len(basis), len(basis))} "
            f"for dimension {n}"
        )
    out = -1j * (left_mult(h) - right_mult(h))
    eye = np.eye(n)
    for a, fa in enumerate(basis):
        for b, fb in enumerate(basis):
            if d[a, b] == 0.0:
                continue
            fbfa = fb @ fa
            out += d[a, b] * (
                np.kron(fa, fb.T)
                - 0.5 * (np.kron(fbfa, eye) + np.kron(eye, fbfa.T))
            )
    return out


@dataclass(frozen=True)
class LindbladForm:
    """Pair (H, d) of a traceless Hermitian Hamiltonian and a Hermitian
    Kossakowski matrix in the fixed traceless basis of :func:`traceless_basis`.

    The Kossakowski matrix is allowed to be indefinite: a quasi-Lindblad form
    extracted from a non-Markovian generator keeps the same structure with a
    non-PSD d, and :meth:`is_valid_lindblad` is exactly the PSD test.
    """

    hamiltonian: np.ndarray
    kossakowski: np.ndarray
    tol: float = field(default=TOL_HERM, compare=False)

    def __post_init__(self):
        h = np.asarray(self.hamiltonian, dtype=complex)
        d = np.asarray(self.kossakowski, dtype=complex)
        n = h.shape[0]
        if h.shape != (n, n):
            raise ValueError("Hamiltonian must be square")
        if d.shape != (n * n - 1, n * n - 1):
            raise ValueError(
                f"Kossakowski matrix shape {d.shape} does not match Hilbert "
                f"space dimension {n} (expected {(n * n - 1, n * n - 1)})"
            )
        if np.max(np.abs(h - h.conj().T)) > self.tol:
            raise ValueError("Hamiltonian is not Hermitian")
        if abs(np.trace(h)) > self.tol:
            raise ValueError("Hamiltonian is not traceless")
        if np.max(np.abs(d - d.conj().T)) > self.tol:
            raise ValueError("Kossakowski matrix is not Hermitian")
        object.__setattr__(self, "hamiltonian", h)
        object.__setattr__(self, "kossakowski", d)

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]

    def kossakowski_eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.kossakowski)

    def is_valid_lindblad(self, tol_psd: float = TOL_PSD) -> bool:
        """True iff the Kossakowski matrix is positive semidefinite."""
        return bool(self.kossakowski_eigenvalues().min() >= -tol_psd)

    def to_superoperator(self) -> np.ndarray:
        return lindblad_matrix(self.hamiltonian, self.kossakowski)


def lindblad_to_superop(form: LindbladForm) -> np.ndarray:
    """Superoperator matrix of a Lindblad form (see module docstring)."""
    return form.to_superoperator()


def _hs_basis(n: int) -> list[np.ndarray]:
    """Hilbert-Schmidt orthonormal basis: identity/sqrt(n) then normalized
    traceless elements."""
    if n == 2:
        traceless = [p / np.sqrt(2.0) for p in PAULIS]
    else:
        traceless = traceless_basis(n)
    return [np.eye(n, dtype=complex) / np.sqrt(n)] + traceless


def superop_to_quasi_lindblad(s: np.ndarray, *, tol_herm: float = 1e-9,
                              tol_tp: float = TOL_TP,
                              tol_roundtrip: float = TOL_ROUNDTRIP) -> LindbladForm:
    """Recast a Hermiticity-preserving trace-annihilating superoperator in
    quasi-Lindblad form.

    The generator is expanded in the Hilbert-Schmidt basis, s = sum q_ab
    (G_a . G_b); the traceless block of q is the Kossakowski matrix in the
    normalized basis, and the Hamiltonian follows from the anti-Hermitian part
    of the identity row.  The result is exact for any generator of the stated
    class; the Kossakowski matrix may well be indefinite.

    Raises ``ValueError`` if the input does not preserve Hermiticity (the
    offending matrix element is reported) and warns if a trace-non-preserving
    residue above ``tol_tp`` had to be discarded.
    """
    s = np.asarray(s, dtype=complex)
    n = int(round(np.sqrt(s.shape[0])))
    if s.ndim != 2 or s.shape[0] != s.shape[1] or n * n != s.shape[0]:
        raise ValueError(
            f"expected an (N^2, N^2) superoperator matrix, got shape {s.shape}"
        )
    defect, at = hermiticity_defect(s)
    if defect > tol_herm:
        raise ValueError(
            f"superoperator is not Hermiticity-preserving: image defect "
            f"{defect:.3e} at matrix element {at}"
        )

    basis = _hs_basis(n)
    m = len(basis)
    q = np.empty((m, m), dtype=complex)
    for a, ga in enumerate(basis):
        for b, gb in enumerate(basis):
            q[a, b] = np.vdot(np.kron(ga, gb.T), s)

    # rho -> W rho + rho W^dag + sum_ij q_ij G_i rho G_j with
    # W = q_00/(2n) 1 + sum_i q_i0 G_i / sqrt(n)
    w = q[0, 0] / (2.0 * n) * np.eye(n, dtype=complex)
    for i in range(1, m):
        w += q[i, 0] / np.sqrt(n) * basis[i]
    h = 0.5j * (w - w.conj().T)
    h -= np.trace(h) / n * np.eye(n)

    c = q[1:, 1:]
    c = 0.5 * (c + c.conj().T)
    d = c / 2.0 if n == 2 else c   # bare Pauli basis carries a factor 2

    form = LindbladForm(hamiltonian=h, kossakowski=d)
    residue = np.max(np.abs(form.to_superoperator() - s))
    if residue > tol_roundtrip:
        if trace_defect(s) > tol_tp:
            warnings.warn(
                f"trace-non-preserving residue (norm {trace_defect(s):.3e}) "
                "discarded in quasi-Lindblad extraction",
                stacklevel=2,
            )
        else:
            raise ValueError(
                f"quasi-Lindblad extraction failed to round-trip "
                f"(residue {residue:.3e})"
            )
    return form


def pauli_coefficients(op: np.ndarray) -> np.ndarray:
    """Coefficients h_k of a 2x2 operator in ``sum_k h_k sigma_k`` (traceless
    part only)."""
    return np.array([np.trace(p @ op) / 2.0 for p in PAULIS])


def lindblad_commutator(a: LindbladForm, b: LindbladForm) -> LindbladForm:
    """Structured commutator [L_a, L_b] of two qubit Lindblad forms.

    Returns the (H, d) pair with H = H_coh + H_diss and d = d_cd + d_diss,
    where the four pieces collect the coherent-coherent, dissipative-
    dissipative, and mixed contributions of the commutator.  The output
    Kossakowski matrix is Hermitian but generally indefinite.  Dimensions
    other than 2 fall back to the matrix commutator plus quasi-Lindblad
    extraction.
    """
    if a.dim != b.dim:
        raise ValueError("dimension mismatch between Lindblad forms")
    if a.dim != 2:
        commutator = (a.to_superoperator() @ b.to_superoperator()
                      - b.to_superoperator() @ a.to_superoperator())
        return superop_to_quasi_lindblad(commutator)

    h1 = pauli_coefficients(a.hamiltonian).real
    h2 = pauli_coefficients(b.hamiltonian).real
    d1 = a.kossakowski
    d2 = b.kossakowski

    h_coh = -1j * (a.hamiltonian @ b.hamiltonian - b.hamiltonian @ a.hamiltonian)

    # dissipative-dissipative: Hamiltonian and Kossakowski pieces
    coeffs_hdiss = -2.0 * np.einsum("nmq,nk,mk->q", _EPS3, d1.real, d2.real)
    h_diss = sum(c * p for c, p in zip(coeffs_hdiss, PAULIS))

    m12 = d1 @ d2.T
    d_diss = 2.0j * (m12.imag - m12.imag.T)

    # mixed coherent-dissipative piece
    term1 = (np.einsum("knl,lm,k->nm", _EPS3, d1, h2)
             - np.einsum("knl,lm,k->nm", _EPS3, d2, h1))
    term2 = (np.einsum("kml,nl,k->nm", _EPS3, d1, h2)
             - np.einsum("kml,nl,k->nm", _EPS3, d2, h1))
    d_cd = 2.0 * (term1 + term2)

    return LindbladForm(hamiltonian=h_coh + h_diss, kossakowski=d_cd + d_diss)


def frobenius_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Frobenius-norm distance ||a - b||_F between two superoperators."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))
