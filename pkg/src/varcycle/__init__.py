"""Interacting-agent vector autoregression with explicit spectral
decomposition, dual-path simulation, covariance diagnostics, and the
induced scalar business-cycle model."""

from . import errors
from .cycle import (
    CycleModel,
    CycleRegime,
    CycleSolution,
    PeriodEstimate,
    ScalarNoise,
    dominant_period,
    fit_constants,
    forcing_series,
    forcing_term,
    general_homogeneous_solution,
    homogeneous_solution,
    invertibility_region_check,
    particular_solution,
    psi_weights,
    reduce_to_cycle,
    sample_scalar_noise,
    scalar_noise_from_vector,
    simulate_cycle,
)
from .model import (
    ModelParams,
    NoiseSpec,
    TransitionMatrix,
    build_transition_matrix,
    lint_params,
    validate_noise,
    validate_params,
)
from .moments import (
    CovarianceReport,
    CrossCovariance,
    LimitReport,
    LongRunEstimate,
    MomentInputs,
    MonteCarloSpec,
    cross_covariance,
    limiting_moments,
    mc_cross_covariance,
    mc_long_run,
    moment_inputs,
    stationarity_diagnostic,
    transformed_inputs,
)
from .simulate import (
    AggregateSeries,
    NoiseDraw,
    NoisePath,
    Trajectory,
    aggregates,
    mix_seed,
    sample_noise_path,
    simulate_explicit,
    simulate_recursive,
)
from .spectral import (
    BOUNDARY_TOL,
    DecompositionCheck,
    EigenStructure,
    Regime,
    RegimeBoundaries,
    SpectralDecomposition,
    build_basis,
    build_basis_inverse,
    characteristic_polynomial_eval,
    classify_regime,
    decompose,
    eigen_structure,
    jordan_block_power,
    jordan_blocks,
    jordan_diag,
    verify_decomposition,
)

__version__ = "0.1.0"

__all__ = [
    "AggregateSeries",
    "BOUNDARY_TOL",
    "CovarianceReport",
    "CrossCovariance",
    "CycleModel",
    "CycleRegime",
    "CycleSolution",
    "DecompositionCheck",
    "EigenStructure",
    "LimitReport",
    "LongRunEstimate",
    "ModelParams",
    "MomentInputs",
    "MonteCarloSpec",
    "NoiseDraw",
    "NoisePath",
    "NoiseSpec",
    "PeriodEstimate",
    "Regime",
    "RegimeBoundaries",
    "ScalarNoise",
    "SpectralDecomposition",
    "Trajectory",
    "TransitionMatrix",
    "aggregates",
    "build_basis",
    "build_basis_inverse",
    "build_transition_matrix",
    "characteristic_polynomial_eval",
    "classify_regime",
    "cross_covariance",
    "decompose",
    "dominant_period",
    "eigen_structure",
    "errors",
    "fit_constants",
    "forcing_series",
    "forcing_term",
    "general_homogeneous_solution",
    "homogeneous_solution",
    "jordan_block_power",
    "jordan_blocks",
    "jordan_diag",
    "limiting_moments",
    "lint_params",
    "mc_cross_covariance",
    "mc_long_run",
    "mix_seed",
    "moment_inputs",
    "invertibility_region_check",
    "particular_solution",
    "psi_weights",
    "reduce_to_cycle",
    "sample_noise_path",
    "sample_scalar_noise",
    "scalar_noise_from_vector",
    "simulate_cycle",
    "simulate_explicit",
    "simulate_recursive",
    "stationarity_diagnostic",
    "transformed_inputs",
    "validate_noise",
    "validate_params",
    "verify_decomposition",
]
