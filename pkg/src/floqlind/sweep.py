"""Parameter sweeps over (E, omega) grids for phase-diagram data.

Each grid point is an independent task: the exact pipeline propagates the
one-cycle map, decomposes it and minimizes the distance from Markovianity
over logarithm branches; the expansion pipelines build the corresponding
high-frequency approximant and test it the same way, recording additionally
its Frobenius distance to the exact best-branch generator.

Records are emitted in deterministic row-major order (omega rows, E columns)
regardless of the worker count.  Points below ``omega_floor`` and points with
a degenerate one-cycle spectrum are NaN-valued, never silently zero; for the
expansion pipelines a degenerate exact spectrum only blanks the distance
column, since the approximant itself remains well defined.
"""

from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .expansions import magnus_order, vanvleck_floquet_generator, vanvleck_keff
from .markovianity import (
    TOL_MU,
    DegenerateSpectrumError,
    mu_for_candidate,
    mu_min,
    spectral_decompose,
)
from .models import ModelParams, driven_qubit, one_cycle_map, static_qubit_generator
from .rotating_frame import rotfr_components_analytic, rotfr_magnus1, rotfr_magnus2

PIPELINES = ("exact", "magnus-direct", "magnus-rot", "vanvleck-rot", "keff-rot")
_VALID_ORDERS = {
    "exact": (0,),
    "magnus-direct": (1, 2, 3),
    "magnus-rot": (1, 2),
    "vanvleck-rot": (2, 3),
    "keff-rot": (1, 2, 3),
}

CSV_HEADER = ("e,omega,mu_min,has_lindbladian,frobenius_to_exact,"
              "best_branch,degenerate_flag,wall_time_ms")


class UsageError(ValueError):
    """Invalid sweep configuration; maps to exit code 2 in the CLI."""


@dataclass(frozen=True)
class SweepConfig:
    gamma: float
    phi: float
    e_min: float
    e_max: float
    e_count: int
    omega_min: float
    omega_max: float
    omega_count: int
    pipeline: str
    order: int = 0
    x_range: int = 5
    steps_per_period: int = 2000
    omega_floor: float = 0.0
    output_path: str = "sweep.csv"
    workers: int = 1

    def validate(self) -> None:
        if self.pipeline not in PIPELINES:
            raise UsageError(
                f"unknown pipeline {self.pipeline!r}; choose from {PIPELINES}"
            )
        if self.order not in _VALID_ORDERS[self.pipeline]:
            raise UsageError(
                f"pipeline {self.pipeline!r} does not support order {self.order} "
                f"(valid: {_VALID_ORDERS[self.pipeline]})"
            )
        if self.e_count < 2 or self.omega_count < 2:
            raise UsageError("grid counts must be >= 2")
        if self.omega_min <= 0 or self.omega_max < self.omega_min:
            raise UsageError("omega range must be positive and increasing")
        if self.e_min < 0 or self.e_max < self.e_min:
            raise UsageError("E range must be nonnegative and increasing")
        if self.x_range < 1:
            raise UsageError("x_range must be >= 1")
        if self.steps_per_period < 100:
            raise UsageError("steps_per_period must be >= 100")
        if self.workers < 1:
            raise UsageError("workers must be >= 1")
        if self.pipeline == "magnus-rot" and self.phi != 0.0:
            raise UsageError(
                "the rotating-frame Magnus pipeline is defined for phi = 0 "
                "(other phases are reached through the exact pipeline)"
            )

    def e_values(self) -> np.ndarray:
        return np.linspace(self.e_min, self.e_max, self.e_count)

    def omega_values(self) -> np.ndarray:
        return np.linspace(self.omega_min, self.omega_max, self.omega_count)


@dataclass
class SweepRecord:
    e: float
    omega: float
    mu_min: float
    has_lindbladian: bool
    frobenius_to_exact: float
    best_branch: int
    degenerate_flag: bool
    wall_time_ms: int


def _vanvleck_t0(params: ModelParams) -> float:
    """Stroboscopic reference time reproducing driving phase phi at t0 = 0.

    Shifting the cosine drive by phi is a time translation, so the one-cycle
    map at phase phi equals the phi = 0 one-cycle map anchored at
    t0 = -phi T / (2 pi), taken modulo T.
    """
    return (-params.phi / (2.0 * math.pi)) % 1.0 * params.period


def _approximant(config: SweepConfig, params: ModelParams) -> np.ndarray:
    if config.pipeline == "magnus-direct":
        series = driven_qubit(params).fourier
        return magnus_order(series, params.omega, config.order).generator
    base = ModelParams(gamma=params.gamma, drive_e=params.drive_e,
                       omega=params.omega, phi=0.0)
    if config.pipeline == "magnus-rot":
        if config.order == 1:
            return rotfr_magnus1(base).generator
        return rotfr_magnus2(base).generator
    n_max = math.ceil(base.z) + 20
    series = rotfr_components_analytic(base, n_max).components
    if config.pipeline == "keff-rot":
        return vanvleck_keff(series, base.omega, config.order).generator
    if config.pipeline == "vanvleck-rot":
        t0 = _vanvleck_t0(params)
        return vanvleck_floquet_generator(series, base.omega, config.order,
                                          t0=t0).generator
    raise UsageError(f"pipeline {config.pipeline!r} has no approximant")


def _evaluate_point(config: SweepConfig, e: float, omega: float) -> SweepRecord:
    started = time.perf_counter()

    def finish(mu, has, frob, branch, degenerate):
        return SweepRecord(
            e=float(e), omega=float(omega), mu_min=mu, has_lindbladian=has,
            frobenius_to_exact=frob, best_branch=branch,
            degenerate_flag=degenerate,
            wall_time_ms=int(round((time.perf_counter() - started) * 1000.0)),
        )

    if omega < config.omega_floor:
        return finish(math.nan, False, math.nan, 0, False)

    params = ModelParams(gamma=config.gamma, drive_e=float(e),
                         omega=float(omega), phi=config.phi)
    propagator = one_cycle_map(params, 0.0, config.steps_per_period)
    degenerate = False
    exact_generator = None
    exact_mu = math.nan
    exact_has = False
    exact_branch = 0
    try:
        decomposition = spectral_decompose(propagator)
        verdict = mu_min(decomposition, params.period, config.x_range,
                         tie_break_reference=static_qubit_generator(params.gamma))
        exact_generator = verdict.generator
        exact_mu = verdict.mu_min
        exact_has = verdict.has_floquet_lindbladian
        exact_branch = verdict.best_branch[0] if len(verdict.best_branch) == 1 else 0
    except DegenerateSpectrumError:
        degenerate = True

    if config.pipeline == "exact":
        if degenerate or not math.isfinite(exact_mu):
            return finish(math.nan, False, math.nan, 0, degenerate)
        return finish(exact_mu, exact_has, math.nan, exact_branch, False)

    candidate = _approximant(config, params)
    mu = mu_for_candidate(candidate)
    has = math.isfinite(mu) and mu <= TOL_MU
    if exact_generator is not None:
        frob = float(np.linalg.norm(candidate - exact_generator))
    else:
        frob = math.nan
    return finish(mu, has, frob, 0, degenerate)


def _worker_block(args) -> list[tuple[int, SweepRecord]]:
    config, points = args
    return [(idx, _evaluate_point(config, e, omega)) for idx, e, omega in points]


def run_sweep(config: SweepConfig) -> tuple[list[SweepRecord], dict]:
    """Run the configured sweep, write CSV plus a JSON metadata sidecar, and
    return the records with a summary."""
    config.validate()
    try:
        with open(config.output_path, "a"):
            pass
    except OSError as exc:
        raise UsageError(f"output path is not writable: {exc}") from exc
    es = config.e_values()
    omegas = config.omega_values()
    points = [
        (i * len(es) + j, e, omega)
        for i, omega in enumerate(omegas)
        for j, e in enumerate(es)
    ]

    started = time.perf_counter()
    if config.workers == 1:
        indexed = _worker_block((config, points))
    else:
        blocks = [points[k::config.workers] for k in range(config.workers)]
        indexed = []
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            for chunk in pool.map(_worker_block, [(config, b) for b in blocks if b]):
                indexed.extend(chunk)
    indexed.sort(key=lambda pair: pair[0])
    records = [rec for _, rec in indexed]
    elapsed = time.perf_counter() - started

    write_csv(config.output_path, records)
    meta = {
        "config": asdict(config),
        "code_version": __version__,
        "integrator": {"scheme": "rk4-fixed-step",
                       "steps_per_period": config.steps_per_period},
        "grid": {"e": es.tolist(), "omega": omegas.tolist()},
        "elapsed_seconds": elapsed,
    }
    with open(config.output_path + ".meta.json", "w") as fh:
        json.dump(meta, fh, indent=2)

    finite = [r for r in records if math.isfinite(r.mu_min)]
    summary = {
        "points": len(records),
        "evaluated": len(finite),
        "non_lindbladian": sum(1 for r in finite if not r.has_lindbladian),
        "degenerate": sum(1 for r in records if r.degenerate_flag),
        "elapsed_seconds": elapsed,
    }
    return records, summary


def _fmt(value: float) -> str:
    if math.isnan(value):
        return "nan"
    return f"{value:.17g}"


def write_csv(path: str, records: list[SweepRecord]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in records:
            fh.write(",".join([
                _fmt(r.e),
                _fmt(r.omega),
                _fmt(r.mu_min),
                "true" if r.has_lindbladian else "false",
                _fmt(r.frobenius_to_exact),
                str(r.best_branch),
                "true" if r.degenerate_flag else "false",
                str(r.wall_time_ms),
            ]) + "\n")


def read_csv(path: str) -> list[SweepRecord]:
    records = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        expected = CSV_HEADER.split(",")
        if reader.fieldnames != expected:
            raise ValueError(f"unexpected CSV header in {path}: {reader.fieldnames}")
        for row in reader:
            records.append(SweepRecord(
                e=float(row["e"]),
                omega=float(row["omega"]),
                mu_min=float(row["mu_min"]),
                has_lindbladian=row["has_lindbladian"] == "true",
                frobenius_to_exact=float(row["frobenius_to_exact"]),
                best_branch=int(row["best_branch"]),
                degenerate_flag=row["degenerate_flag"] == "true",
                wall_time_ms=int(row["wall_time_ms"]),
            ))
    return records


@dataclass
class PhaseComparison:
    count_a: int
    count_b: int

    @property
    def difference(self) -> int:
        return self.count_a - self.count_b


def compare_phases(path_a: str, path_b: str) -> PhaseComparison:
    """Count non-Lindbladian points in two sweeps over the same grid.

    A point counts as non-Lindbladian when it was evaluated (finite mu) and
    the Lindblad test failed.  Raises on grid mismatch.
    """
    rec_a = read_csv(path_a)
    rec_b = read_csv(path_b)
    if len(rec_a) != len(rec_b):
        raise ValueError("grid mismatch: different number of records")
    for a, b in zip(rec_a, rec_b):
        if not (math.isclose(a.e, b.e, abs_tol=1e-12)
                and math.isclose(a.omega, b.omega, abs_tol=1e-12)):
            raise ValueError(
                f"grid mismatch at (E={a.e}, omega={a.omega}) vs "
                f"(E={b.e}, omega={b.omega})"
            )

    def count(records):
        return sum(1 for r in records
                   if math.isfinite(r.mu_min) and not r.has_lindbladian)

    return PhaseComparison(count_a=count(rec_a), count_b=count(rec_b))
