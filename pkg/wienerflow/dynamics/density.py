"""Radon-Nikodym densities of the pushed-forward Gaussian measure along a flow."""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np
from prefect.logging import get_logger
from scipy.stats import ks_2samp

from wienerflow.montecarlo import Estimate, sample_gaussian

from .fields import FlowError, MissingDivergenceError, VectorField, WindowError
from .integrator import SolverOptions, integrate_flow
from .moments import (
    MomentDiagnostics,
    exp_moment_diagnostics,
    single_field_bound,
    two_part_bound,
)

logger = get_logger("wienerflow.dynamics")


class DensityMode(str, Enum):
    DIVERGENCE_INTEGRAL = "divergence_integral"
    ANALYTIC = "analytic_change_of_variables"
    JACOBIAN = "jacobian"


@dataclass
class DensityResult:
    """log Lambda_{s,t} at each endpoint y; failed samples carry NaN."""

    s: float
    t: float
    mode: DensityMode
    endpoints: np.ndarray
    log_density: np.ndarray
    failed: np.ndarray
    error: str = ""

    @property
    def density(self) -> np.ndarray:
        return np.exp(self.log_density)

    @property
    def success(self) -> bool:
        return not bool(self.failed.any())


def density_along_flow(
    field: VectorField,
    s: float,
    t: float,
    endpoints: np.ndarray,
    mode: DensityMode = DensityMode.DIVERGENCE_INTEGRAL,
    options: SolverOptions | None = None,
) -> DensityResult:
    """Lambda_{s,t}(y) = d(T_{s,t})_* mu / d mu at y.

    divergence_integral: exp of int_s^t delta v_r(T_{t,r} y) dr, integrated
    along the backward flow from y. analytic_change_of_variables: the
    field's closed form phi(T^-1 y)/phi(y) |det DT^-1(y)|. jacobian: the
    same expression with DT_{t,s} from the variational equation.
    """
    mode = DensityMode(mode)
    y = np.atleast_2d(np.asarray(endpoints, dtype=float))
    if mode is DensityMode.ANALYTIC:
        log_density = field.log_density(s, t, y)
        if log_density is None:
            raise MissingDivergenceError(f"{field.name} has no closed-form density")
        log_density = np.asarray(log_density, dtype=float)
        return DensityResult(s, t, mode, y, log_density, ~np.isfinite(log_density))

    if mode is DensityMode.DIVERGENCE_INTEGRAL:
        backward = integrate_flow(field, t, s, y, options, with_log_density=True)
        log_density = -backward.log_density
    else:
        backward = integrate_flow(field, t, s, y, options, with_jacobian=True)
        x0 = backward.endpoints
        sign, logdet = np.linalg.slogdet(backward.jacobians)
        log_density = 0.5 * (np.sum(y**2, axis=1) - np.sum(x0**2, axis=1)) + logdet
        log_density = np.where(sign != 0, log_density, np.nan)
    failed = backward.failed | ~np.isfinite(log_density)
    return DensityResult(s, t, mode, y, log_density, failed, backward.error)


@dataclass
class DensityLpCheck:
    """E Lambda^p against the two moment bounds."""

    p: float
    theta: float
    estimate: Estimate
    two_part_bound: float
    single_field_bound: float
    moments: MomentDiagnostics
    passed: bool


def density_lp_check(
    field: VectorField,
    s: float,
    t: float,
    p: float,
    theta: float,
    n: int = 20_000,
    seed: int = 0,
    options: SolverOptions | None = None,
    u: VectorField | None = None,
    b: VectorField | None = None,
    k: float = 4.0,
) -> DensityLpCheck:
    """MC estimate of E Lambda_{s,t}^p with the exponential-moment bound.

    The window |t - s| < theta/(2p) is enforced. The check passes when the
    exponential moments are finite and stable and the estimate does not
    exceed the two-part bound by more than k standard errors. Unstable
    moments never pass, whatever the bound evaluates to.
    """
    if p <= 1:
        raise ValueError(f"p must be > 1, got {p}")
    if abs(t - s) >= theta / (2.0 * p):
        raise WindowError(
            f"|t - s| = {abs(t - s):g} is outside the admissible window theta/(2p) = {theta / (2 * p):g}"
        )
    y = sample_gaussian(field.dim, n, seed)
    density = density_along_flow(field, s, t, y, options=options)
    estimate = Estimate.from_values(np.exp(p * density.log_density), seed)
    moments = exp_moment_diagnostics(field, theta, s, t, n=n, seed=seed + 1, u=u, b=b)
    bound = two_part_bound(p, moments)
    passed = moments.finite and estimate.valid and estimate.mean <= bound + k * estimate.std_error
    logger.info(f"[DENSITY] E Lambda^{p:g} = {estimate.mean:.6g} +- {estimate.std_error:.2g}, bound {bound:.6g}")
    return DensityLpCheck(
        p=p,
        theta=theta,
        estimate=estimate,
        two_part_bound=bound,
        single_field_bound=single_field_bound(p, moments),
        moments=moments,
        passed=passed,
    )


@dataclass
class DerivativeCheck:
    """Weak difference quotients of Lambda at s against E[Phi delta v_s]."""

    steps: tuple[float, ...]
    quotients: tuple[float, ...]
    target: float
    target_std_error: float
    extrapolated: float
    rate: float | None
    passed: bool


def density_derivative_check(
    field: VectorField,
    s: float,
    test_function: Callable[[np.ndarray], np.ndarray],
    steps: Sequence[float] = (0.1, 0.05, 0.025, 0.0125),
    n: int = 20_000,
    seed: int = 0,
    options: SolverOptions | None = None,
    min_rate: float = 0.9,
    k: float = 4.0,
) -> DerivativeCheck:
    """E[Phi (Lambda_{s,s+h} - 1)/h] for shrinking h, on one common batch.

    The quotients converge to E[Phi delta v_s] at first order. The limit is
    Richardson-extrapolated from the two smallest steps and the rate is the
    log-log slope of |quotient - target|. When every error is already below
    the solver tolerance no rate is reported and the check passes on the
    values alone.
    """
    if not field.has_divergence:
        raise MissingDivergenceError(f"{field.name} has no divergence")
    options = options or SolverOptions()
    steps = tuple(sorted((float(h) for h in steps), reverse=True))
    if len(steps) < 2 or steps[-1] <= 0:
        raise FlowError("need at least two positive steps")
    y = sample_gaussian(field.dim, n, seed)
    phi = np.asarray(test_function(y), dtype=float)

    target_values = phi * field.divergence(s, y)
    target = float(np.mean(target_values))
    target_se = float(np.std(target_values, ddof=1) / math.sqrt(n)) if n > 1 else 0.0

    quotients = []
    for h in steps:
        density = density_along_flow(field, s, s + h, y, options=options)
        quotients.append(float(np.nanmean(phi * np.expm1(density.log_density) / h)))
    extrapolated = 2.0 * quotients[-1] - quotients[-2]

    errors = np.abs(np.asarray(quotients) - target)
    floor = max(1e-10 * max(1.0, abs(target)), options.tolerance / steps[-1])
    rate = None
    if np.all(errors > floor):
        slope, _ = np.polyfit(np.log(steps), np.log(errors), 1)
        rate = float(slope)
    close = abs(extrapolated - target) <= k * target_se + 10.0 * floor
    passed = close and (rate is None or rate >= min_rate)
    logger.info(
        f"[DENSITY] derivative at s={s}: limit {extrapolated:.6g} vs {target:.6g}, rate {rate}"
    )
    return DerivativeCheck(
        steps=steps,
        quotients=tuple(quotients),
        target=target,
        target_std_error=target_se,
        extrapolated=extrapolated,
        rate=rate,
        passed=passed,
    )


@dataclass
class MeasurePreservation:
    """Per-coordinate KS p-values of T_{s,t} x against fresh samples, and max |Lambda - 1|."""

    p_values: tuple[float, ...]
    max_density_deviation: float
    density_tolerance: float
    alpha: float
    passed: bool


def measure_preservation_check(
    field: VectorField,
    s: float,
    t: float,
    n: int = 100_000,
    seed: int = 0,
    options: SolverOptions | None = None,
    alpha: float = 1e-3,
) -> MeasurePreservation:
    """Two-sample KS per coordinate plus the density at the flowed points.

    The fresh batch is the next ``n`` samples of the same stream, so both
    batches are independent and reproducible.
    """
    options = options or SolverOptions()
    x = sample_gaussian(field.dim, n, seed)
    fresh = sample_gaussian(field.dim, n, seed, start=n)
    flow = integrate_flow(field, s, t, x, options)
    moved = flow.endpoints[~flow.failed]
    p_values = tuple(
        float(ks_2samp(moved[:, i], fresh[:, i]).pvalue) for i in range(field.dim)
    )
    density = density_along_flow(field, s, t, moved, options=options)
    deviation = float(np.max(np.abs(np.expm1(density.log_density)))) if len(moved) else math.inf
    tolerance = 10.0 * options.tolerance
    passed = min(p_values) > alpha and deviation <= tolerance
    logger.info(f"[DENSITY] KS min p-value {min(p_values):.3g}, max |Lambda - 1| {deviation:.3e}")
    return MeasurePreservation(
        p_values=p_values,
        max_density_deviation=deviation,
        density_tolerance=tolerance,
        alpha=alpha,
        passed=passed,
    )
