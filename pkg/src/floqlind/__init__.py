"""Floquet Lindbladians of periodically driven open quantum systems.

The package decides whether the stroboscopic one-cycle map of a time-periodic
Lindblad master equation is generated by a time-independent Lindblad-form
generator, quantifies the distance from Markovianity when it is not, and
builds Magnus / van Vleck high-frequency approximations of the Floquet
generator in the direct and rotating frames.
"""

__version__ = "0.1.0"

from .superops import (
    LindbladForm,
    frobenius_distance,
    lindblad_commutator,
    lindblad_to_superop,
    superop_to_quasi_lindblad,
)
from .models import (
    FourierSeries,
    ModelParams,
    PeriodicGenerator,
    driven_qubit,
    fourier_components,
    one_cycle_map,
    propagate,
)
from .markovianity import (
    DegenerateSpectrumError,
    MarkovianityVerdict,
    NoHermitianLogError,
    SingularMapError,
    SpectralDecomposition,
    branch_log,
    conditional_cp_matrix,
    depolarizing_generator,
    is_hermiticity_preserving,
    mu_for_candidate,
    mu_min,
    spectral_decompose,
)
from .expansions import (
    ExpansionResult,
    magnus_convergence_bound,
    magnus_integral_oracle,
    magnus_order,
    vanvleck_floquet_generator,
    vanvleck_keff,
    vanvleck_micromotion,
)
from .rotating_frame import (
    RotatingFrameSeries,
    gauge_transform,
    rotfr_components_analytic,
    rotfr_components_bessel_matrix,
    rotfr_magnus1,
    rotfr_magnus2,
)
from .sweep import SweepConfig, SweepRecord, compare_phases, run_sweep

__all__ = [
    "LindbladForm",
    "frobenius_distance",
    "lindblad_commutator",
    "lindblad_to_superop",
    "superop_to_quasi_lindblad",
    "FourierSeries",
    "ModelParams",
    "PeriodicGenerator",
    "driven_qubit",
    "fourier_components",
    "one_cycle_map",
    "propagate",
    "DegenerateSpectrumError",
    "MarkovianityVerdict",
    "NoHermitianLogError",
    "SingularMapError",
    "SpectralDecomposition",
    "branch_log",
    "conditional_cp_matrix",
    "depolarizing_generator",
    "is_hermiticity_preserving",
    "mu_for_candidate",
    "mu_min",
    "spectral_decompose",
    "ExpansionResult",
    "magnus_convergence_bound",
    "magnus_integral_oracle",
    "magnus_order",
    "vanvleck_floquet_generator",
    "vanvleck_keff",
    "vanvleck_micromotion",
    "RotatingFrameSeries",
    "gauge_transform",
    "rotfr_components_analytic",
    "rotfr_components_bessel_matrix",
    "rotfr_magnus1",
    "rotfr_magnus2",
    "SweepConfig",
    "SweepRecord",
    "compare_phases",
    "run_sweep",
]
