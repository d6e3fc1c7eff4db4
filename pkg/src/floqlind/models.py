"""Time-periodic Lindbladian models and the time-ordered propagator.

The concrete model is a dissipative two-level system with Hamiltonian
``H(t) = sigma_z / 2 + E cos(omega t - phi) sigma_x`` (all energies in units
of the level splitting) and a static decay channel whose Kossakowski matrix
in the bare Pauli basis is ``gamma * [[1, i, 0], [-i, 1, 0], [0, 0, 0]]``.
Its generator has exactly three nonzero Fourier components,

    L_0       static part,
    L_{+/-1}  = -i (E/2) exp(-/+ i phi) [sigma_x, .].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .superops import SIGMA_X, SIGMA_Z, hamiltonian_superop, lindblad_matrix

DEFAULT_STEPS_PER_PERIOD = 2000
MIN_STEPS_PER_PERIOD = 100


class IntegrationError(RuntimeError):
    """Raised when the propagator encounters non-finite values."""

    def __init__(self, t: float, message: str = "non-finite values during integration"):
        super().__init__(f"{message} at t = {t}")
        self.t = t


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless parameters of the driven dissipative two-level system.

    gamma    relative dissipation strength (>= 0)
    drive_e  relative driving amplitude E (>= 0)
    omega    relative driving frequency (> 0)
    phi      driving phase in [0, 2 pi)
    """

    gamma: float
    drive_e: float
    omega: float
    phi: float = 0.0

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be nonnegative, got {self.gamma}")
        if self.drive_e < 0:
            raise ValueError(f"drive_e must be nonnegative, got {self.drive_e}")

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    @property
    def eps(self) -> float:
        """Driving ratio E / omega."""
        return self.drive_e / self.omega

    @property
    def z(self) -> float:
        """Bessel argument 2 E / omega."""
        return 2.0 * self.drive_e / self.omega


@dataclass
class FourierSeries:
    """Fourier components {L_n} of a periodic superoperator family,
    L(t) = sum_n exp(i n omega t) L_n for |n| <= n_max."""

    n_max: int
    components: dict[int, np.ndarray]

    def __post_init__(self):
        if self.n_max < 0:
            raise ValueError("n_max must be nonnegative")

    @property
    def dim(self) -> int:
        some = next(iter(self.components.values()))
        return some.shape[0]

    def component(self, n: int) -> np.ndarray:
        """L_n, with indices beyond the truncation treated as zero."""
        comp = self.components.get(n)
        if comp is None:
            return np.zeros((self.dim, self.dim), dtype=complex)
        return comp

    def reconstruct(self, t: float, omega: float) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for n, comp in self.components.items():
            out += np.exp(1j * n * omega * t) * comp
        return out


@dataclass
class PeriodicGenerator:
    """A T-periodic Lindbladian generator, evaluable at any time, optionally
    with its Fourier components attached.

    ``eval_many`` evaluates a whole array of times at once, returning a
    stacked ``(len(ts), N**2, N**2)`` array; models that can vectorize the
    evaluation provide it, everything else falls back to ``eval_at``.
    """

    period: float
    eval_at: Callable[[float], np.ndarray]
    fourier: FourierSeries | None = None
    dim: int = 2
    eval_many: Callable[[np.ndarray], np.ndarray] | None = None

    @property
    def omega(self) -> float:
        return 2.0 * math.pi / self.period

    def evaluate(self, ts: np.ndarray) -> np.ndarray:
        if self.eval_many is not None:
            return self.eval_many(np.asarray(ts, dtype=float))
        return np.stack([self.eval_at(float(t)) for t in np.asarray(ts)])


def static_qubit_generator(gamma: float) -> np.ndarray:
    """Matrix of L_0: precession around sigma_z plus the static decay channel."""
    d_static = gamma * np.array(
        [[1.0, 1.0j, 0.0], [-1.0j, 1.0, 0.0], [0.0, 0.0, 0.0]], dtype=complex
    )
    return lindblad_matrix(SIGMA_Z / 2.0, d_static)


def driven_qubit(params: ModelParams) -> PeriodicGenerator:
    """Periodic generator of the driven dissipative two-level system."""
    l_static = static_qubit_generator(params.gamma)
    drive = hamiltonian_superop(SIGMA_X)     # -i [sigma_x, .]
    e, omega, phi = params.drive_e, params.omega, params.phi

    components = {0: l_static}
    if e > 0:
        components[1] = 0.5 * e * np.exp(-1j * phi) * drive
        components[-1] = 0.5 * e * np.exp(1j * phi) * drive
    fourier = FourierSeries(n_max=1 if e > 0 else 0, components=components)

    def eval_at(t: float) -> np.ndarray:
        return l_static + e * math.cos(omega * t - phi) * drive

    def eval_many(ts: np.ndarray) -> np.ndarray:
        envelope = e * np.cos(omega * ts - phi)
        return l_static[None, :, :] + envelope[:, None, None] * drive[None, :, :]

    return PeriodicGenerator(period=params.period, eval_at=eval_at,
                             fourier=fourier, dim=2, eval_many=eval_many)


def propagate(gen: PeriodicGenerator, t0: float, t1: float,
              steps_per_period: int = DEFAULT_STEPS_PER_PERIOD) -> np.ndarray:
    """Time-ordered propagator P(t1, t0) of dP/dt = L(t) P.

    Classical fixed-step fourth-order Runge-Kutta; the fixed step keeps
    results bit-reproducible across parameter sweeps.  The per-step transfer
    matrices depend on time only, so all Runge-Kutta stages are assembled as
    one batched computation before the sequential step product.
    """
    if t1 < t0:
        raise ValueError("t1 must be >= t0")
    if steps_per_period < MIN_STEPS_PER_PERIOD:
        raise ValueError(f"steps_per_period must be >= {MIN_STEPS_PER_PERIOD}")
    span = t1 - t0
    n2 = gen.dim * gen.dim
    p = np.eye(n2, dtype=complex)
    if span == 0.0:
        return p
    n_steps = max(1, math.ceil(span / gen.period * steps_per_period))
    h = span / n_steps
    eye = np.eye(n2, dtype=complex)
    block = 8192   # bounds the stage-array allocation on long spans

    for offset in range(0, n_steps, block):
        count = min(block, n_steps - offset)
        starts = t0 + h * (offset + np.arange(count))
        l_start = gen.evaluate(starts)
        l_mid = gen.evaluate(starts + 0.5 * h)
        l_end = gen.evaluate(starts + h)
        for stage, ts in ((l_start, starts), (l_mid, starts + 0.5 * h),
                          (l_end, starts + h)):
            bad = ~np.isfinite(stage).reshape(count, -1).all(axis=1)
            if bad.any():
                raise IntegrationError(float(ts[np.argmax(bad)]))

        # transfer matrix of one step: T = 1 + h/6 (A + 2B + 2C + D) with
        # A = L(t), B = L_mid (1 + h/2 A), C = L_mid (1 + h/2 B),
        # D = L(t+h) (1 + h C)
        a = l_start
        b = l_mid @ (eye + 0.5 * h * a)
        c = l_mid @ (eye + 0.5 * h * b)
        d = l_end @ (eye + h * c)
        transfer = eye + (h / 6.0) * (a + 2.0 * b + 2.0 * c + d)
        for i in range(count):
            p = transfer[i] @ p
    if not np.isfinite(p).all():
        raise IntegrationError(t1)
    return p


def one_cycle_map(params: ModelParams, t0: float = 0.0,
                  steps_per_period: int = DEFAULT_STEPS_PER_PERIOD) -> np.ndarray:
    """One-cycle map P(t0 + T, t0) of the driven qubit."""
    gen = driven_qubit(params)
    return propagate(gen, t0, t0 + params.period, steps_per_period)


def fourier_components(gen: PeriodicGenerator, n_max: int,
                       samples: int | None = None) -> FourierSeries:
    """Fourier components of a periodic generator by discrete Fourier
    transform over one period.

    ``samples`` must satisfy the aliasing guard samples >= 4 n_max + 1; the
    default oversamples generously so that tails well beyond n_max do not
    fold back onto the retained components.
    """
    if samples is None:
        samples = max(4 * n_max + 1, 128)
    if samples < 4 * n_max + 1:
        raise ValueError(
            f"aliasing guard violated: need samples >= {4 * n_max + 1}, got {samples}"
        )
    ts = np.arange(samples) * (gen.period / samples)
    values = np.stack([gen.eval_at(t) for t in ts])
    phases = np.exp(-2j * math.pi * np.outer(np.arange(-n_max, n_max + 1),
                                             np.arange(samples)) / samples)
    comps = np.tensordot(phases, values, axes=(1, 0)) / samples
    components = {n: comps[i] for i, n in enumerate(range(-n_max, n_max + 1))}
    return FourierSeries(n_max=n_max, components=components)


def generator_from_series(series: FourierSeries, omega: float) -> PeriodicGenerator:
    """Periodic generator evaluating the truncated Fourier sum."""
    period = 2.0 * math.pi / omega
    return PeriodicGenerator(
        period=period,
        eval_at=lambda t: series.reconstruct(t, omega),
        fourier=series,
        dim=int(round(math.sqrt(series.dim))),
    )
