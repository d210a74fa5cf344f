"""Symmetric-operator analysis: deficiency indices, self-adjoint extensions,
flow unitaries, and uncertainty bounds."""

from ._core import (
    BetaAlgebraModel,
    ConfigError,
    InfeasibleError,
    OperatorOnDomain,
    ParameterError,
    boundary_extension_spectrum,
    build_beta_algebra,
    build_halfline_derivative,
    build_interval_derivative,
    build_matrix_model,
    check_commutator,
    check_symmetry,
    deficiency_indices,
    generated_algebra_dimension,
    local_phase_errors,
    min_uncertainty,
    sample_gup,
)

__all__ = [
    "BetaAlgebraModel",
    "ConfigError",
    "InfeasibleError",
    "OperatorOnDomain",
    "ParameterError",
    "boundary_extension_spectrum",
    "build_beta_algebra",
    "build_halfline_derivative",
    "build_interval_derivative",
    "build_matrix_model",
    "check_commutator",
    "check_symmetry",
    "deficiency_indices",
    "generated_algebra_dimension",
    "local_phase_errors",
    "min_uncertainty",
    "sample_gup",
]
