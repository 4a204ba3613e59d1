"""Malliavin operators, spectral calculus and operator divergence on chaos objects."""

from .ladder import (
    conditional_project,
    creation,
    divergence,
    field_jacobian,
    gradient,
    partial,
)
from .spectral import (
    SpectralFunction,
    SpectralKind,
    ou_mehler_mc,
    resolvent_by_quadrature,
    spectral_apply,
    spectral_apply_field,
)
from .sobolev import (
    CounterexampleRow,
    NormMode,
    hermite_counterexample_demo,
    sobolev_norm,
    weight_profile,
)
from .operators import (
    SecondMoment,
    matrix_apply,
    matrix_trace,
    matrix_transpose,
    op_divergence,
    second_moment_check,
    weakb_combine,
    weakb_rhs,
)

__all__ = [
    "conditional_project",
    "creation",
    "divergence",
    "field_jacobian",
    "gradient",
    "partial",
    "SpectralFunction",
    "SpectralKind",
    "ou_mehler_mc",
    "resolvent_by_quadrature",
    "spectral_apply",
    "spectral_apply_field",
    "CounterexampleRow",
    "NormMode",
    "hermite_counterexample_demo",
    "sobolev_norm",
    "weight_profile",
    "SecondMoment",
    "matrix_apply",
    "matrix_trace",
    "matrix_transpose",
    "op_divergence",
    "second_moment_check",
    "weakb_combine",
    "weakb_rhs",
]
