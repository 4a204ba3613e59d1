"""Exact sparse Wiener-chaos algebra on the n-dimensional Gaussian space."""

from .space import (
    ChaosDomainError,
    ChaosError,
    DegreeOverflowError,
    DimensionMismatchError,
    GaussianSpace,
    MultiIndex,
    TruncationPolicy,
    total_degree_indices,
)
from .hermite import (
    gauss_hermite_rule,
    gaussian_expectation,
    hermite_table,
    hermite_value,
    linearization_coefficient,
    validate_linearization,
)
from .poly import (
    ChaosPoly,
    compose_linear,
    evaluate,
    expectation,
    l2_inner,
    linear_combine,
    multiply,
)
from .field import (
    ChaosField,
    ChaosMatrix,
    combine_fields,
    field_pair,
    scale_field,
    scale_matrix,
)

__all__ = [
    "ChaosDomainError",
    "ChaosError",
    "DegreeOverflowError",
    "DimensionMismatchError",
    "GaussianSpace",
    "MultiIndex",
    "TruncationPolicy",
    "total_degree_indices",
    "gauss_hermite_rule",
    "gaussian_expectation",
    "hermite_table",
    "hermite_value",
    "linearization_coefficient",
    "validate_linearization",
    "ChaosPoly",
    "compose_linear",
    "evaluate",
    "expectation",
    "l2_inner",
    "linear_combine",
    "multiply",
    "ChaosField",
    "ChaosMatrix",
    "combine_fields",
    "field_pair",
    "scale_field",
    "scale_matrix",
]
