"""Gradient and divergence as Hermite ladder operators, and conditional projections.

With H_n' = sqrt(n) H_{n-1}, the gradient is an annihilation operator and the
divergence (its adjoint) a creation operator:

    grad_i H_alpha = sqrt(alpha_i) H_{alpha - e_i}
    delta(H_alpha e_i) = sqrt(alpha_i + 1) H_{alpha + e_i}
"""

import math
from typing import overload

from wienerflow.chaos import (
    ChaosDomainError,
    ChaosField,
    ChaosMatrix,
    ChaosPoly,
    DegreeOverflowError,
    GaussianSpace,
    MultiIndex,
    TruncationPolicy,
)


def partial(phi: ChaosPoly, direction: int) -> ChaosPoly:
    """d phi / d x_direction."""
    acc: dict[MultiIndex, float] = {}
    for alpha, c in phi.coeffs.items():
        k = alpha.get(direction)
        if k:
            lowered = alpha.shifted(direction, -1)
            acc[lowered] = acc.get(lowered, 0.0) + math.sqrt(k) * c
    return ChaosPoly.from_coeffs(phi.space, acc)


def gradient(phi: ChaosPoly) -> ChaosField:
    """Field with component i = d phi / d x_i; exact, lowers the degree by one."""
    space = phi.space
    parts: list[dict[MultiIndex, float]] = [{} for _ in range(space.dim)]
    for alpha, c in phi.coeffs.items():
        for i, k in alpha.entries:
            lowered = alpha.shifted(i, -1)
            parts[i][lowered] = parts[i].get(lowered, 0.0) + math.sqrt(k) * c
    return ChaosField(space, tuple(ChaosPoly.from_coeffs(space, part) for part in parts))


def creation(p: ChaosPoly, direction: int, policy: TruncationPolicy = TruncationPolicy.ERROR) -> ChaosPoly:
    """delta(p e_direction) = x_direction p - d p / d x_direction."""
    space = p.space
    acc: dict[MultiIndex, float] = {}
    for alpha, c in p.coeffs.items():
        raised = alpha.shifted(direction, 1)
        if raised.degree > space.degree_cap:
            if policy is TruncationPolicy.ERROR:
                raise DegreeOverflowError(
                    f"divergence raises {alpha} above cap {space.degree_cap}"
                )
            continue
        acc[raised] = acc.get(raised, 0.0) + math.sqrt(alpha.get(direction) + 1) * c
    return ChaosPoly.from_coeffs(space, acc)


def divergence(v: ChaosField, policy: TruncationPolicy = TruncationPolicy.ERROR) -> ChaosPoly:
    """Skorokhod divergence delta v = sum_i delta(v_i e_i); always zero mean."""
    space = v.space
    acc: dict[MultiIndex, float] = {}
    for i, component in enumerate(v.components):
        for alpha, c in creation(component, i, policy).coeffs.items():
            acc[alpha] = acc.get(alpha, 0.0) + c
    return ChaosPoly.from_coeffs(space, acc)


def field_jacobian(f: ChaosField) -> ChaosMatrix:
    """J with J_ij = d f_i / d x_j (row i is the gradient of component i)."""
    rows = [gradient(component) for component in f.components]
    return ChaosMatrix.from_rows(rows)


def _check_level(space: GaussianSpace, m: int) -> None:
    if not 1 <= m <= space.dim:
        raise ChaosDomainError(f"projection level {m} outside 1..{space.dim}")


def _restrict(p: ChaosPoly, m: int) -> ChaosPoly:
    return ChaosPoly(
        p.space, {alpha: c for alpha, c in p.coeffs.items() if alpha.supported_below(m)}
    )


@overload
def conditional_project(x: ChaosPoly, m: int) -> ChaosPoly: ...
@overload
def conditional_project(x: ChaosField, m: int) -> ChaosField: ...
@overload
def conditional_project(x: ChaosMatrix, m: int) -> ChaosMatrix: ...


def conditional_project(x, m):
    """E[. | F_m] in chaos form, with the coordinate projection pi_m on fields.

    F_m is generated by the first ``m`` coordinates. Polys keep the terms
    supported in directions < m; fields additionally zero components >= m;
    matrices zero rows and columns >= m.
    """
    _check_level(x.space, m)
    if isinstance(x, ChaosPoly):
        return _restrict(x, m)
    if isinstance(x, ChaosField):
        zero = ChaosPoly.zero(x.space)
        return ChaosField(
            x.space,
            tuple(_restrict(c, m) if i < m else zero for i, c in enumerate(x.components)),
        )
    if isinstance(x, ChaosMatrix):
        zero = ChaosPoly.zero(x.space)
        return ChaosMatrix.from_function(
            x.space,
            lambda i, j: _restrict(x.entries[i][j], m) if i < m and j < m else zero,
        )
    raise TypeError(f"cannot project {type(x).__name__}")
