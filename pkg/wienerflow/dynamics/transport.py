"""Flow laws and the transport equation df/dt = delta(A grad f) along B = dd(A^T)."""

from typing import Sequence

import numpy as np
from prefect.logging import get_logger
from pydantic import BaseModel
from scipy import linalg

from wienerflow.calculus import (
    divergence,
    gradient,
    matrix_apply,
    matrix_transpose,
    op_divergence,
    partial,
)
from wienerflow.chaos import (
    ChaosField,
    ChaosMatrix,
    ChaosPoly,
    MultiIndex,
    compose_linear,
    field_pair,
    linear_combine,
)

from .fields import ChaosVectorField, FlowError, VectorField, constant_matrix_field
from .integrator import SolverOptions, integrate_flow

logger = get_logger("wienerflow.dynamics")

# the residual drops sum A_ij d_i d_j f, which vanishes only for antisymmetric A
ANTISYMMETRY_ATOL = 1e-12


def _weighted_sup(diff: np.ndarray, weights: Sequence[float] | None) -> float:
    q = np.asarray(weights, dtype=float) if weights is not None else 1.0
    norms = np.linalg.norm(diff * q, axis=-1)
    norms = norms[np.isfinite(norms)]
    return float(norms.max()) if norms.size else float("inf")


def flow_law_residual(
    field: VectorField,
    r: float,
    s: float,
    t: float,
    x: np.ndarray,
    options: SolverOptions | None = None,
    weights: Sequence[float] | None = None,
) -> float:
    """sup over the batch of ||T_{r,t} x - T_{s,t}(T_{r,s} x)||_W."""
    direct = integrate_flow(field, r, t, x, options).endpoints
    middle = integrate_flow(field, r, s, x, options).endpoints
    composed = integrate_flow(field, s, t, middle, options).endpoints
    return _weighted_sup(direct - composed, weights)


def reversibility_residual(
    field: VectorField,
    s: float,
    t: float,
    x: np.ndarray,
    options: SolverOptions | None = None,
) -> float:
    """sup over the batch of |T_{t,s}(T_{s,t} x) - x|."""
    forward = integrate_flow(field, s, t, x, options).endpoints
    back = integrate_flow(field, t, s, forward, options).endpoints
    return _weighted_sup(back - np.atleast_2d(x), None)


def group_law_residual(
    field: VectorField,
    a: float,
    b: float,
    x: np.ndarray,
    options: SolverOptions | None = None,
) -> float:
    """sup over the batch of |T_a(T_b x) - T_{a+b} x| for an autonomous field."""
    if not field.autonomous:
        raise FlowError(f"group law needs an autonomous field, {field.name} is time dependent")
    inner = integrate_flow(field, 0.0, b, x, options).endpoints
    composed = integrate_flow(field, 0.0, a, inner, options).endpoints
    direct = integrate_flow(field, 0.0, a + b, x, options).endpoints
    return _weighted_sup(composed - direct, None)


def transport_field(a: ChaosMatrix) -> VectorField:
    """B = dd(A^T): a linear field for constant A, a chaos field otherwise."""
    if a.is_constant:
        return constant_matrix_field(a)
    return ChaosVectorField.autonomous_field(op_divergence(matrix_transpose(a)))


def _column_divergence(a: ChaosMatrix) -> ChaosField:
    """c_j = sum_i d_i A_ij."""
    dim = a.space.dim
    return ChaosField(
        a.space,
        tuple(linear_combine([(1.0, partial(a[(i, j)], i)) for i in range(dim)]) for j in range(dim)),
    )


class TransportRow(BaseModel):
    t: float
    pathwise_residual: float
    first_order_residual: float
    chaos_residual: float | None = None
    pullback_gap: float | None = None


class TransportTable(BaseModel):
    tolerance: float
    rows: list[TransportRow]

    @property
    def max_residual(self) -> float:
        values = [row.pathwise_residual for row in self.rows]
        values += [row.chaos_residual for row in self.rows if row.chaos_residual is not None]
        return max(values, default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance


def _chaos_transport_step(f0: ChaosPoly, a: ChaosMatrix, propagator: np.ndarray, generator: np.ndarray):
    """f_t = f0(R_t x) and the exact residual of df_t/dt - delta(A grad f_t) in L^2."""
    space = f0.space
    f_t = compose_linear(f0, propagator)
    velocity = generator @ propagator
    linear = ChaosField(
        space,
        tuple(
            ChaosPoly.from_coeffs(space, {MultiIndex.unit(k): velocity[j, k] for k in range(space.dim)})
            for j in range(space.dim)
        ),
    )
    pulled_gradient = gradient(f0).map(lambda c: compose_linear(c, propagator))
    dfdt = field_pair(pulled_gradient, linear)
    rhs = divergence(matrix_apply(a, gradient(f_t)))
    return f_t, (dfdt - rhs).l2_norm()


def transport_pde_residual(
    a: ChaosMatrix,
    f0: ChaosPoly,
    t_grid: np.ndarray,
    x: np.ndarray,
    options: SolverOptions | None = None,
    tolerance: float = 1e-6,
) -> TransportTable:
    """Residual of df/dt = delta(A grad f) for f(t) = f0 o T_t on a time grid.

    Pathwise: df/dt = <grad f0(T_t x), B(T_t x)> is compared with
    delta(A grad f)(x) and with <grad f(t, x), B(x)>, where
    grad f(t, x) = DT_t(x)^T grad f0(T_t x) comes from the variational
    equation. For constant A the flow is R_t = expm(t A^T) and f(t) is also
    pulled back exactly in chaos form.
    """
    a.space.require_same(f0.space)
    asymmetry = (a + matrix_transpose(a)).max_abs_diff(ChaosMatrix.zero(a.space))
    if asymmetry > ANTISYMMETRY_ATOL:
        raise FlowError(f"A must be antisymmetric, max |A + A^T| = {asymmetry:.3e}")
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid[0] != 0.0:
        raise FlowError("transport time grid must start at 0")
    b = transport_field(a)
    x = np.atleast_2d(np.asarray(x, dtype=float))
    flow = integrate_flow(b, 0.0, float(t_grid[-1]), x, options, grid=t_grid, with_jacobian=True)
    keep = ~flow.failed
    x = x[keep]

    grad0 = gradient(f0)
    a_x = a.evaluate(x)
    c_x = _column_divergence(a).evaluate(x)
    b_x = b.velocity(0.0, x)
    generator = a.constant_values().T if a.is_constant else None

    rows = []
    for k, t in enumerate(flow.times):
        y = flow.trajectories[keep, k]
        jac = flow.jacobian_path[keep, k]
        g_y = grad0.evaluate(y)
        lhs = np.sum(g_y * b.velocity(0.0, y), axis=1)
        grad_f = np.einsum("nji,nj->ni", jac, g_y)
        a_grad = np.einsum("nij,nj->ni", a_x, grad_f)
        rhs = np.sum(a_grad * x, axis=1) - np.sum(c_x * grad_f, axis=1)
        first_order = np.sum(grad_f * b_x, axis=1)

        chaos_residual = pullback_gap = None
        if generator is not None:
            f_t, chaos_residual = _chaos_transport_step(f0, a, linalg.expm(t * generator), generator)
            pullback_gap = float(np.max(np.abs(np.atleast_1d(f_t.evaluate(x)) - np.atleast_1d(f0.evaluate(y)))))
        rows.append(
            TransportRow(
                t=float(t),
                pathwise_residual=float(np.max(np.abs(lhs - rhs))),
                first_order_residual=float(np.max(np.abs(lhs - first_order))),
                chaos_residual=chaos_residual,
                pullback_gap=pullback_gap,
            )
        )
    table = TransportTable(tolerance=tolerance, rows=rows)
    logger.info(f"[PDE] max residual {table.max_residual:.3e} over {len(rows)} times")
    return table


class ConverseResidual(BaseModel):
    linear: float
    exponential: float


def converse_residuals(
    field: VectorField,
    betas: Sequence[float],
    shifts: Sequence[float],
    t_grid: np.ndarray,
    x: np.ndarray,
    options: SolverOptions | None = None,
) -> ConverseResidual:
    """Functionals of coordinate solutions solve the transport equation.

    g(t, x) = sum_j beta_j (T_{t + tau_j} x)_j and
    psi(t, x) = exp(i sum_j (T_{t + tau_j} x)_j) both satisfy
    dh/dt = <grad h(t, x), B(x)> for an autonomous field B. Shifts and grid
    times are non-negative.
    """
    if not field.autonomous:
        raise FlowError(f"converse checks need an autonomous field, {field.name} is time dependent")
    t_grid = np.asarray(t_grid, dtype=float)
    if len(betas) != field.dim or len(shifts) != field.dim:
        raise FlowError(f"need {field.dim} coefficients and shifts")
    if t_grid[0] < 0 or min(shifts) < 0:
        raise FlowError("grid times and shifts must be non-negative")
    x = np.atleast_2d(np.asarray(x, dtype=float))
    b_x = field.velocity(0.0, x)

    # per coordinate j: d/dt (T_{t+tau_j} x)_j and <grad (T_{t+tau_j} x)_j, B(x)>
    rates = np.zeros((len(x), len(t_grid), field.dim))
    fluxes = np.zeros_like(rates)
    phases = np.zeros((len(x), len(t_grid)))
    valid = np.ones(len(x), dtype=bool)
    for j, tau in enumerate(shifts):
        times = t_grid + tau
        grid = times if times[0] == 0.0 else np.concatenate([[0.0], times])
        flow = integrate_flow(field, 0.0, float(grid[-1]), x, options, grid=grid, with_jacobian=True)
        offset = len(grid) - len(times)
        y = flow.trajectories[:, offset:]
        jac = flow.jacobian_path[:, offset:]
        velocity = np.stack([field.velocity(0.0, y[:, k]) for k in range(len(times))], axis=1)
        rates[:, :, j] = velocity[:, :, j]
        fluxes[:, :, j] = np.einsum("nkl,nl->nk", jac[:, :, j, :], b_x)
        phases += y[:, :, j]
        valid &= ~flow.failed

    betas = np.asarray(betas, dtype=float)
    linear = np.abs((rates - fluxes) @ betas)
    psi = np.exp(1j * phases)
    exponential = np.abs(1j * psi * rates.sum(axis=2) - 1j * psi * fluxes.sum(axis=2))
    return ConverseResidual(
        linear=float(np.max(linear[valid])) if valid.any() else float("inf"),
        exponential=float(np.max(exponential[valid])) if valid.any() else float("inf"),
    )
