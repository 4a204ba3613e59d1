"""Operator-valued random variables: transpose, trace, application and divergence.

Orientation: entry (i, j) of a ChaosMatrix is <K e_j, e_i>, and the operator
divergence has components (dd K)_i = delta(row i of K) = delta(K^T e_i).
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from wienerflow.chaos import (
    ChaosField,
    ChaosMatrix,
    ChaosPoly,
    DimensionMismatchError,
    TruncationPolicy,
    field_pair,
    l2_inner,
    linear_combine,
    multiply,
)

from .ladder import divergence, field_jacobian


def matrix_transpose(k: ChaosMatrix) -> ChaosMatrix:
    return ChaosMatrix.from_function(k.space, lambda i, j: k.entries[j][i])


def matrix_trace(k: ChaosMatrix) -> ChaosPoly:
    return linear_combine([(1.0, k.entries[i][i]) for i in range(k.space.dim)])


def matrix_apply(
    k: ChaosMatrix,
    l: Sequence[float] | ChaosField,
    policy: TruncationPolicy = TruncationPolicy.ERROR,
) -> ChaosField:
    """Field with component i = sum_j K_ij l_j, for a covector or a random field."""
    space = k.space
    if isinstance(l, ChaosField):
        space.require_same(l.space)
        return ChaosField(space, tuple(field_pair(k.row(i), l, policy) for i in range(space.dim)))
    covector = np.asarray(l, dtype=float)
    if covector.shape != (space.dim,):
        raise DimensionMismatchError(
            f"covector has shape {covector.shape}, expected ({space.dim},)"
        )
    return ChaosField(
        space,
        tuple(
            linear_combine([(covector[j], k.entries[i][j]) for j in range(space.dim)])
            for i in range(space.dim)
        ),
    )


def op_divergence(k: ChaosMatrix, policy: TruncationPolicy = TruncationPolicy.ERROR) -> ChaosField:
    """dd K with component i = delta(row i of K)."""
    return ChaosField(k.space, tuple(divergence(k.row(i), policy) for i in range(k.space.dim)))


def weakb_combine(
    k: ChaosMatrix, f: ChaosField, policy: TruncationPolicy = TruncationPolicy.ERROR
) -> ChaosPoly:
    """delta(K^T F), computed directly."""
    return divergence(matrix_apply(matrix_transpose(k), f, policy), policy)


def weakb_rhs(
    k: ChaosMatrix, f: ChaosField, policy: TruncationPolicy = TruncationPolicy.ERROR
) -> ChaosPoly:
    """<F, dd K> - tr(K^T J_F), the right-hand side of the weak product rule."""
    jacobian = field_jacobian(f)
    n = k.space.dim
    trace_terms = [
        (1.0, multiply(k.entries[i][j], jacobian.entries[i][j], policy))
        for i in range(n)
        for j in range(n)
    ]
    return linear_combine(
        [(1.0, field_pair(f, op_divergence(k, policy), policy)), (-1.0, linear_combine(trace_terms))]
    )


@dataclass(frozen=True)
class SecondMoment:
    """E(du dG) against its two right-hand sides."""

    lhs: float
    rhs_trace: float
    rhs_pairing: float

    def spread(self) -> float:
        values = (self.lhs, self.rhs_trace, self.rhs_pairing)
        return max(values) - min(values)


def second_moment_check(
    u: ChaosField, g: ChaosField, policy: TruncationPolicy = TruncationPolicy.ERROR
) -> SecondMoment:
    """E(du dG), E<u,G> + E tr(J_G J_u) and E<u,G> + E<dd(J_u^T), G>.

    Expectations of products are taken as L2 inner products of coefficients,
    so only the divergences themselves need to fit under the cap.
    """
    u.space.require_same(g.space)
    n = u.space.dim
    pairing = sum(l2_inner(a, b) for a, b in zip(u.components, g.components))
    ju = field_jacobian(u)
    jg = field_jacobian(g)
    trace_term = sum(
        l2_inner(jg.entries[i][j], ju.entries[j][i]) for i in range(n) for j in range(n)
    )
    dd = op_divergence(matrix_transpose(ju), policy)
    pairing_term = sum(l2_inner(a, b) for a, b in zip(dd.components, g.components))
    return SecondMoment(
        lhs=l2_inner(divergence(u, policy), divergence(g, policy)),
        rhs_trace=pairing + trace_term,
        rhs_pairing=pairing + pairing_term,
    )
