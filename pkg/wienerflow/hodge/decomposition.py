"""Divergence-free plus exact decomposition of chaos fields, and antisymmetric potentials."""

from dataclasses import dataclass

import numpy as np
from prefect.logging import get_logger
from pydantic import BaseModel

from wienerflow.calculus import (
    SpectralFunction,
    divergence,
    field_jacobian,
    gradient,
    matrix_transpose,
    op_divergence,
    spectral_apply,
    spectral_apply_field,
)
from wienerflow.chaos import (
    ChaosDomainError,
    ChaosField,
    ChaosMatrix,
    ChaosPoly,
    GaussianSpace,
    TruncationPolicy,
)
from wienerflow.chaos.random import random_antisymmetric_matrix
from wienerflow.chaos.serialization import FieldDoc, MatrixDoc, PolyDoc, to_document

logger = get_logger("wienerflow.hodge")

# coefficients at or below this are roundoff from exactly cancelling sums
EXACT_ATOL = 1e-12


class NotDivergenceFreeError(ChaosDomainError):
    """The field passed where a divergence-free field is required has delta v != 0."""

    pass


@dataclass(frozen=True)
class HodgeDecomposition:
    """v = v0 + ve with delta v0 = 0 and ve = grad psi, E[psi] = 0."""

    v0: ChaosField
    ve: ChaosField
    psi: ChaosPoly

    def reconstruct(self) -> ChaosField:
        return self.v0 + self.ve


def hodge_decompose(
    v: ChaosField,
    policy: TruncationPolicy = TruncationPolicy.ERROR,
    atol: float = EXACT_ATOL,
) -> HodgeDecomposition:
    """psi = L^-1 delta v, ve = grad psi, v0 = v - ve.

    delta v is chopped at ``atol`` first, so a field that is divergence-free
    up to roundoff decomposes as (v, 0, 0).
    """
    dv = divergence(v, policy).chop(atol)
    if dv.is_zero:
        space = v.space
        return HodgeDecomposition(v0=v, ve=ChaosField.zero(space), psi=ChaosPoly.zero(space))
    psi = spectral_apply(dv, SpectralFunction.inverse_l())
    ve = gradient(psi)
    logger.debug(f"[HODGE] exact part carries {len(psi.coeffs)} potential term(s)")
    return HodgeDecomposition(v0=(v - ve).chop(atol), ve=ve, psi=psi)


def require_divergence_free(v: ChaosField, atol: float = EXACT_ATOL) -> None:
    lifted = v.lift(v.space.with_cap(v.space.degree_cap + 1))
    residual = divergence(lifted)
    worst = max((abs(c) for c in residual.coeffs.values()), default=0.0)
    if worst > atol:
        raise NotDivergenceFreeError(
            f"field has divergence with coefficient up to {worst:.3e} (> {atol:g})"
        )


def antisym_representation(
    v0: ChaosField,
    policy: TruncationPolicy = TruncationPolicy.ERROR,
    atol: float = EXACT_ATOL,
) -> ChaosMatrix:
    """Antisymmetric A with dd A = v0, for divergence-free v0.

    u = (1 + L)^-1 v0 component-wise and A = J_u - J_u^T with
    (J_u)_ij = d u_i / d x_j. Non-divergence-free input is rejected.
    """
    require_divergence_free(v0, atol)
    u = spectral_apply_field(v0, SpectralFunction.resolvent_power(1.0))
    jacobian = field_jacobian(u)
    return jacobian - matrix_transpose(jacobian)


def random_divergence_free_field(
    rng: np.random.Generator,
    space: GaussianSpace,
    max_degree: int | None = None,
    terms: int = 2,
) -> ChaosField:
    """dd A for a random antisymmetric A, divergence-free up to roundoff.

    By default the field stays one degree below the cap so its own divergence
    fits as well.
    """
    max_degree = max(space.degree_cap - 2, 0) if max_degree is None else max_degree
    a = random_antisymmetric_matrix(rng, space, max_degree, terms)
    return op_divergence(a)


class HodgeBundle(BaseModel):
    """Serialized output of a decomposition run."""

    v0: FieldDoc
    ve: FieldDoc
    psi: PolyDoc
    A: MatrixDoc | None = None


def hodge_bundle(decomposition: HodgeDecomposition, a: ChaosMatrix | None) -> HodgeBundle:
    return HodgeBundle(
        v0=to_document(decomposition.v0),
        ve=to_document(decomposition.ve),
        psi=to_document(decomposition.psi),
        A=to_document(a) if a is not None else None,
    )
