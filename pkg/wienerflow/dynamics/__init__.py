"""Flows of time-dependent vector fields on the Gaussian space and their densities."""

from .fields import (
    FIELD_REGISTRY,
    BlowupField,
    ChaosVectorField,
    FieldEvaluationError,
    FlowError,
    LinearField,
    MissingDivergenceError,
    RotationField,
    TanhField,
    VectorField,
    WindowError,
    ZeroField,
    closed_form_field,
    constant_matrix_field,
    poly_functional,
)
from .integrator import FlowDiagnostics, FlowResult, SolverMethod, SolverOptions, integrate_flow
from .moments import MomentDiagnostics, exp_moment_diagnostics, single_field_bound, two_part_bound
from .density import (
    DensityLpCheck,
    DensityMode,
    DensityResult,
    DerivativeCheck,
    MeasurePreservation,
    density_along_flow,
    density_derivative_check,
    density_lp_check,
    measure_preservation_check,
)
from .galerkin import GalerkinRow, GalerkinTable, galerkin_convergence, galerkin_truncate
from .adapted import (
    AdaptednessReport,
    AdaptednessRow,
    adaptedness_check,
    field_is_adapted,
    filtration_level,
)
from .transport import (
    ConverseResidual,
    TransportRow,
    TransportTable,
    converse_residuals,
    flow_law_residual,
    group_law_residual,
    reversibility_residual,
    transport_field,
    transport_pde_residual,
)

__all__ = [
    "FIELD_REGISTRY",
    "BlowupField",
    "ChaosVectorField",
    "FieldEvaluationError",
    "FlowError",
    "LinearField",
    "MissingDivergenceError",
    "RotationField",
    "TanhField",
    "VectorField",
    "WindowError",
    "ZeroField",
    "closed_form_field",
    "constant_matrix_field",
    "poly_functional",
    "FlowDiagnostics",
    "FlowResult",
    "SolverMethod",
    "SolverOptions",
    "integrate_flow",
    "MomentDiagnostics",
    "exp_moment_diagnostics",
    "single_field_bound",
    "two_part_bound",
    "DensityLpCheck",
    "DensityMode",
    "DensityResult",
    "DerivativeCheck",
    "MeasurePreservation",
    "density_along_flow",
    "density_derivative_check",
    "density_lp_check",
    "measure_preservation_check",
    "GalerkinRow",
    "GalerkinTable",
    "galerkin_convergence",
    "galerkin_truncate",
    "AdaptednessReport",
    "AdaptednessRow",
    "adaptedness_check",
    "field_is_adapted",
    "filtration_level",
    "ConverseResidual",
    "TransportRow",
    "TransportTable",
    "converse_residuals",
    "flow_law_residual",
    "group_law_residual",
    "reversibility_residual",
    "transport_field",
    "transport_pde_residual",
]
