"""Markovianity test for the stroboscopic one-cycle map.

The one-cycle map P(T) is spectrally decomposed into real eigenvalues and
complex-conjugate pairs.  Every branch of the matrix logarithm yields a
Floquet-generator candidate

    K_x = K_0 + i omega sum_c x_c (P_c - P_c*),        x in Z^{n_c},

and a candidate generates a completely positive trace-preserving semigroup
iff it (i) preserves Hermiticity and (ii) is conditionally completely
positive, i.e. the Choi matrix projected off the maximally entangled state is
positive semidefinite (Wolf et al., PRL 101, 150402 (2008)).  When no branch
passes, the distance from Markovianity mu_min is the smallest depolarizing
noise strength that repairs the best candidate.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .superops import (
    LindbladForm,
    hermiticity_defect,
    superop_to_quasi_lindblad,
    vec,
)

COND_MAX = 1e8          # eigenvector condition number above which a point is
                        # treated as (numerically) defective
TOL_PAIR = 1e-8         # eigenvalue pairing tolerance, relative
TOL_MU = 1e-6           # absolute bisection tolerance on mu
TOL_PSD = 1e-9          # PSD threshold on the projected Choi matrix
TOL_EXP = 1e-7          # branch-consistency tolerance ||exp(T K_x) - P||
MU_CAP = 2.0 ** 10      # largest bracket tried before declaring infeasible


class DegenerateSpectrumError(RuntimeError):
    """Near-defective one-cycle map: two eigenvalues collide faster than the
    eigenvectors stay independent (the dashed-line points of the phase
    diagrams)."""

    def __init__(self, eig_a: complex, eig_b: complex, cond: float):
        super().__init__(
            f"near-degenerate spectrum: eigenvalues {eig_a} and {eig_b} "
            f"(eigenvector condition number {cond:.3e})"
        )
        self.eigenvalues = (eig_a, eig_b)
        self.cond = cond


class NoHermitianLogError(RuntimeError):
    """The map has a negative real eigenvalue of odd multiplicity, so no
    branch of the logarithm preserves Hermiticity."""

    def __init__(self, eigenvalue: float):
        super().__init__(
            f"negative real eigenvalue {eigenvalue} of odd multiplicity: "
            "no Hermiticity-preserving logarithm exists"
        )
        self.eigenvalue = eigenvalue


class SingularMapError(RuntimeError):
    """The map has a (numerically) zero eigenvalue; no logarithm exists."""


@dataclass
class SpectralDecomposition:
    """Spectral data of a one-cycle map.

    ``real_blocks`` holds (eigenvalue, projector) for real eigenvalues, with
    the projector summed over multiplicity.  ``complex_pairs`` holds
    (lambda_c, P_c, P_c*) for conjugate pairs; coincident real pairs that pinch
    the real axis are split into two conjugation-related half projectors and
    listed here as well, which keeps the full branch family reachable at such
    points.
    """

    dim: int
    real_blocks: list[tuple[float, np.ndarray]]
    complex_pairs: list[tuple[complex, np.ndarray, np.ndarray]]

    @property
    def n_r(self) -> int:
        return len(self.real_blocks)

    @property
    def n_c(self) -> int:
        return len(self.complex_pairs)

    def reconstruct(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for lam, proj in self.real_blocks:
            out += lam * proj
        for lam, p_c, p_cc in self.complex_pairs:
            out += lam * p_c + np.conjugate(lam) * p_cc
        return out


def _swap_permutation(n: int) -> np.ndarray:
    """Permutation matrix of (i, j) -> (j, i) on row-major vectorized
    operators; conjugation with it realizes rho -> rho^dag up to complex
    conjugation."""
    perm = np.zeros((n * n, n * n))
    for i in range(n):
        for j in range(n):
            perm[j * n + i, i * n + j] = 1.0
    return perm


def _theta(v: np.ndarray, swap: np.ndarray) -> np.ndarray:
    """Antilinear involution induced by Hermitian conjugation of operators."""
    return swap @ np.conjugate(v)


def _split_real_pair(cluster_vecs: np.ndarray, projector: np.ndarray,
                     swap: np.ndarray) -> tuple[np.ndarray, np.ndarray] | None:
    """Split a two-dimensional real-eigenvalue eigenspace into two projectors
    exchanged by the Hermiticity involution.  Returns None if no split with
    well-separated directions exists."""
    candidates = [
        cluster_vecs[:, 0],
        cluster_vecs[:, 0] + cluster_vecs[:, 1],
        cluster_vecs[:, 0] + 1j * cluster_vecs[:, 1],
        cluster_vecs[:, 1] + 1j * cluster_vecs[:, 0],
    ]
    best = None
    best_sep = 0.0
    for v in candidates:
        v = v / np.linalg.norm(v)
        tv = projector @ _theta(v, swap)
        norm_tv = np.linalg.norm(tv)
        if norm_tv < 1e-8:
            continue
        tv = tv / norm_tv
        basis = np.column_stack([v, tv])
        sep = np.linalg.svd(basis, compute_uv=False)[-1]
        if sep > best_sep:
            best_sep = sep
            best = basis
    if best is None or best_sep < 1e-6:
        return None
    left = np.linalg.pinv(best) @ projector
    p_c = np.outer(best[:, 0], left[0])
    p_cc = np.outer(best[:, 1], left[1])
    return p_c, p_cc


def spectral_decompose(p: np.ndarray, cond_max: float = COND_MAX,
                       tol_pair: float = TOL_PAIR) -> SpectralDecomposition:
    """Eigendecomposition of a one-cycle map into real eigenvalues and
    conjugate pairs with biorthogonally normalized spectral projectors.

    Raises :class:`DegenerateSpectrumError` when the eigenvector matrix is
    ill-conditioned beyond ``cond_max`` (defective or near-defective map).
    """
    p = np.asarray(p, dtype=complex)
    dim = p.shape[0]
    eigvals, eigvecs = np.linalg.eig(p)
    cond = np.linalg.cond(eigvecs)
    if cond > cond_max:
        order = np.argsort(eigvals)
        gaps = np.abs(np.diff(eigvals[order]))
        k = int(np.argmin(gaps))
        raise DegenerateSpectrumError(eigvals[order][k], eigvals[order][k + 1], cond)
    left = np.linalg.inv(eigvecs)

    scale = max(1.0, float(np.max(np.abs(eigvals))))
    tol_abs = tol_pair * scale

    # cluster numerically coincident eigenvalues
    unassigned = list(range(len(eigvals)))
    clusters: list[list[int]] = []
    while unassigned:
        seed = unassigned.pop(0)
        cluster = [seed]
        for idx in list(unassigned):
            if abs(eigvals[idx] - eigvals[seed]) <= tol_abs:
                cluster.append(idx)
                unassigned.remove(idx)
        clusters.append(cluster)

    def cluster_projector(idxs):
        proj = np.zeros((dim, dim), dtype=complex)
        for i in idxs:
            proj += np.outer(eigvecs[:, i], left[i])
        return proj

    swap = _swap_permutation(int(round(math.sqrt(dim))))
    real_blocks: list[tuple[float, np.ndarray]] = []
    complex_pairs: list[tuple[complex, np.ndarray, np.ndarray]] = []
    used = [False] * len(clusters)
    means = [np.mean(eigvals[c]) for c in clusters]

    for a, cluster in enumerate(clusters):
        if used[a]:
            continue
        used[a] = True
        lam = means[a]
        if abs(lam.imag) <= tol_abs:
            proj = cluster_projector(cluster)
            if len(cluster) == 2:
                split = _split_real_pair(eigvecs[:, cluster], proj, swap)
                if split is not None:
                    complex_pairs.append((complex(lam.real, 0.0), *split))
                    continue
            real_blocks.append((float(lam.real), proj))
            continue
        # genuinely complex: find the conjugate cluster
        partner = None
        for b in range(len(clusters)):
            if used[b]:
                continue
            if abs(means[b] - np.conjugate(lam)) <= 2 * tol_abs:
                partner = b
                break
        if partner is None:
            raise ValueError(
                f"spectrum not closed under conjugation: eigenvalue {lam} "
                "has no conjugate partner (input map does not preserve "
                "Hermiticity)"
            )
        used[partner] = True
        lam_sym = 0.5 * (lam + np.conjugate(means[partner]))
        p_pos = cluster_projector(cluster)
        p_neg = cluster_projector(clusters[partner])
        if lam_sym.imag >= 0:
            complex_pairs.append((lam_sym, p_pos, p_neg))
        else:
            complex_pairs.append((np.conjugate(lam_sym), p_neg, p_pos))

    return SpectralDecomposition(dim=dim, real_blocks=real_blocks,
                                 complex_pairs=complex_pairs)


def branch_log(dec: SpectralDecomposition, x, T: float) -> np.ndarray:
    """Floquet-generator candidate K_x from branch x of log P(T) / T.

    x = 0 is the principal branch; any other integer vector adds
    i omega x_c (P_c - P_c*) per conjugate pair.  Raises
    :class:`NoHermitianLogError` for negative real eigenvalues of odd
    multiplicity and :class:`SingularMapError` for zero eigenvalues.
    """
    x = np.atleast_1d(np.asarray(x, dtype=int))
    if x.shape != (dec.n_c,):
        raise ValueError(f"branch vector has length {x.size}, expected {dec.n_c}")
    omega = 2.0 * math.pi / T
    k = np.zeros((dec.dim, dec.dim), dtype=complex)
    for lam, proj in dec.real_blocks:
        if abs(lam) < 1e-14:
            raise SingularMapError(f"zero eigenvalue {lam}: map has no logarithm")
        if lam < 0:
            raise NoHermitianLogError(lam)
        k += (math.log(lam) / T) * proj
    for (lam, p_c, p_cc), x_c in zip(dec.complex_pairs, x):
        if abs(lam) < 1e-14:
            raise SingularMapError(f"zero eigenvalue {lam}: map has no logarithm")
        log_c = np.log(lam)  # principal: arg in (-pi, pi], +i pi on the cut
        k += (log_c / T) * p_c + (np.conjugate(log_c) / T) * p_cc
        if x_c != 0:
            k += 1j * omega * x_c * (p_c - p_cc)
    return k


def is_hermiticity_preserving(k: np.ndarray, tol: float = 1e-9) -> bool:
    """True iff the superoperator maps Hermitian operators to Hermitian
    operators (entrywise tolerance)."""
    defect, _ = hermiticity_defect(k)
    return defect < tol


def choi_matrix(k: np.ndarray) -> np.ndarray:
    """Choi matrix N (K x 1)[|Phi><Phi|] of a superoperator, |Phi> the
    maximally entangled state; a reshuffle of the superoperator matrix."""
    k = np.asarray(k, dtype=complex)
    n = int(round(math.sqrt(k.shape[0])))
    return k.reshape(n, n, n, n).transpose(0, 2, 1, 3).reshape(n * n, n * n)


def maximally_entangled_projector(n: int) -> np.ndarray:
    phi = vec(np.eye(n)) / math.sqrt(n)
    return np.outer(phi, phi.conj())


def conditional_cp_matrix(k: np.ndarray, check: bool = True) -> np.ndarray:
    """Projected Choi matrix Phi_perp K^Gamma Phi_perp whose positive
    semidefiniteness is the conditional-complete-positivity test."""
    k = np.asarray(k, dtype=complex)
    n = int(round(math.sqrt(k.shape[0])))
    if check:
        defect, at = hermiticity_defect(k)
        if defect > 1e-8:
            raise ValueError(
                f"input is not Hermiticity-preserving (defect {defect:.3e} at "
                f"matrix element {at}); the projected Choi matrix would not "
                "be Hermitian"
            )
    perp = np.eye(n * n) - maximally_entangled_projector(n)
    m = perp @ choi_matrix(k) @ perp
    return 0.5 * (m + m.conj().T)


def depolarizing_generator(n: int) -> np.ndarray:
    """Generator N of the depolarizing channel,
    exp(T mu N) rho = exp(-mu T) rho + (1 - exp(-mu T)) Tr(rho) 1/n."""
    ident = vec(np.eye(n))
    return -np.eye(n * n, dtype=complex) + np.outer(ident, ident.conj()) / n


@dataclass
class MarkovianityVerdict:
    """Outcome of the branch-resolved Lindblad test on a one-cycle map."""

    has_floquet_lindbladian: bool
    best_branch: tuple[int, ...]
    mu_min: float
    generator: np.ndarray | None
    quasi_form: LindbladForm | None
    degenerate_spectrum_flag: bool = False
    branch_mus: dict[tuple[int, ...], float] = field(default_factory=dict)


def _min_eig(m: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(m)[0])


def mu_for_candidate(k: np.ndarray, *, tol_mu: float = TOL_MU,
                     tol_psd: float = TOL_PSD, mu_cap: float = MU_CAP,
                     tol_herm: float = 1e-6) -> float:
    """Minimal depolarizing strength mu >= 0 making K + mu N conditionally
    completely positive; inf when the candidate violates Hermiticity
    preservation (noise cannot repair that) or no finite mu works.

    Adding noise only adds PSD mass to the projected Choi matrix, so
    feasibility is monotone in mu and bisection is well posed.
    """
    k = np.asarray(k, dtype=complex)
    n = int(round(math.sqrt(k.shape[0])))
    defect, _ = hermiticity_defect(k)
    if defect > tol_herm:
        return math.inf
    v = conditional_cp_matrix(k, check=False)
    w = conditional_cp_matrix(depolarizing_generator(n), check=False)

    def feasible(mu: float) -> bool:
        return _min_eig(v + mu * w) >= -tol_psd

    if feasible(0.0):
        return 0.0
    hi = 1.0
    while not feasible(hi):
        hi *= 2.0
        if hi > mu_cap:
            return math.inf
    lo = 0.0
    while hi - lo > tol_mu:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return hi


def mu_min(dec: SpectralDecomposition, T: float, x_range: int = 5, *,
           tie_break_reference: np.ndarray | None = None,
           tol_mu: float = TOL_MU, tol_psd: float = TOL_PSD) -> MarkovianityVerdict:
    """Distance from Markovianity minimized over logarithm branches.

    Scans x in [-x_range, x_range]^{n_c}; per branch, mu is found by bisection
    on the PSD feasibility of the noise-repaired projected Choi matrix.
    Branches violating Hermiticity preservation are excluded; if none remain
    (negative real eigenvalue of odd multiplicity), the verdict carries
    mu_min = inf.

    Exactly degenerate maps make several branches tie at the same mu; ties
    within tol_mu are broken toward the generator closest in Frobenius norm
    to ``tie_break_reference`` when given (the natural anchor is the
    time-averaged generator), otherwise toward the smallest branch index.
    """
    if x_range < 1:
        raise ValueError("x_range must be >= 1")
    try:
        k0 = branch_log(dec, np.zeros(dec.n_c, dtype=int), T)
    except NoHermitianLogError:
        return MarkovianityVerdict(
            has_floquet_lindbladian=False,
            best_branch=(0,) * dec.n_c,
            mu_min=math.inf,
            generator=None,
            quasi_form=None,
        )
    omega = 2.0 * math.pi / T
    shifts = [1j * omega * (p_c - p_cc) for _, p_c, p_cc in dec.complex_pairs]

    best: tuple[float, float, tuple[int, ...]] | None = None
    best_k = None
    branch_mus: dict[tuple[int, ...], float] = {}
    for x in itertools.product(range(-x_range, x_range + 1), repeat=dec.n_c):
        k_x = k0.copy()
        for x_c, shift in zip(x, shifts):
            if x_c:
                k_x += x_c * shift
        mu = mu_for_candidate(k_x, tol_mu=tol_mu, tol_psd=tol_psd)
        branch_mus[x] = mu
        if tie_break_reference is not None:
            tie_key = float(np.linalg.norm(k_x - tie_break_reference))
        else:
            tie_key = float(sum(abs(c) for c in x))
        if best is None or (mu < best[0] - tol_mu) or (
            abs(mu - best[0]) <= tol_mu and tie_key < best[1]
        ):
            best = (mu, tie_key, x)
            best_k = k_x

    assert best is not None and best_k is not None
    mu_best, _, x_best = best
    has = math.isfinite(mu_best) and mu_best <= tol_mu
    quasi = superop_to_quasi_lindblad(best_k) if math.isfinite(mu_best) else None
    return MarkovianityVerdict(
        has_floquet_lindbladian=has,
        best_branch=x_best,
        mu_min=mu_best,
        generator=best_k,
        quasi_form=quasi,
        branch_mus=branch_mus,
    )
