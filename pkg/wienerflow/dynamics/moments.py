"""Exponential-moment diagnostics for the flow existence hypotheses."""

import math
from typing import Sequence

import numpy as np
from prefect.logging import get_logger
from pydantic import BaseModel

from wienerflow.montecarlo import Estimate, combined_std_error, sample_gaussian

from .fields import ChaosVectorField, VectorField, ZeroField

logger = get_logger("wienerflow.dynamics")


class MomentDiagnostics(BaseModel):
    """Gamma_H, Gamma_W and the single-field Gamma^eta over [min(s,t), max(s,t)].

    ``finite`` is set when every estimate is finite, valid and stable under
    halving the sample count.
    """

    theta: float
    s: float
    t: float
    gamma_h: Estimate
    gamma_w: Estimate
    gamma_eta: Estimate
    worst_level: int
    stable: bool
    finite: bool


def _time_nodes(s: float, t: float, points: int) -> np.ndarray:
    return np.linspace(min(s, t), max(s, t), max(points, 2))


def _integrate(values: np.ndarray, times: np.ndarray) -> np.ndarray:
    """Trapezoid rule along axis 1 of a (N, len(times)) array."""
    if times[-1] == times[0]:
        return np.zeros(len(values))
    return np.trapezoid(values, times, axis=1)


def _h_integrand(field: VectorField, r: float, x: np.ndarray, theta: float) -> np.ndarray:
    jac_norm = np.linalg.norm(field.jacobian(r, x), ord=2, axis=(1, 2))
    return np.exp(theta * (jac_norm + np.abs(field.divergence(r, x))))


def _w_integrand(
    field: VectorField, r: float, x: np.ndarray, theta: float, q: np.ndarray, m: int
) -> np.ndarray:
    jac = field.jacobian(r, x)
    projected = np.zeros_like(jac)
    projected[:, :m, :] = jac[:, :m, :]
    scaled = q[None, :, None] * projected / q[None, None, :]
    return np.exp(theta * np.linalg.norm(scaled, ord=2, axis=(1, 2)))


def _stable(values: np.ndarray, seed: int) -> tuple[Estimate, bool]:
    full = Estimate.from_values(values, seed)
    half = Estimate.from_values(values[: max(len(values) // 2, 1)], seed)
    if not (full.valid and math.isfinite(full.mean)):
        return full, False
    spread = abs(full.mean - half.mean)
    return full, spread <= 4.0 * combined_std_error(full, half) + 1e-12 * abs(full.mean)


def exp_moment_diagnostics(
    field: VectorField,
    theta: float,
    s: float,
    t: float,
    n: int = 20_000,
    seed: int = 0,
    u: VectorField | None = None,
    b: VectorField | None = None,
    weights: Sequence[float] | None = None,
    time_points: int = 21,
    workers: int = 1,
) -> MomentDiagnostics:
    """Monte-Carlo estimates of the exponential moments behind the density bounds.

    Gamma_H uses ``u`` (gradient spectral norm plus |delta u|), Gamma_W the
    sup over projection levels m of the weighted norm of pi_m grad B, and
    Gamma^eta the whole field. Without a supplied decomposition u = field and
    B = 0. The time integral uses the trapezoid rule on ``time_points`` nodes.
    """
    if theta <= 0:
        raise ValueError(f"theta must be positive, got {theta}")
    if u is None and b is None:
        u, b = field, ZeroField(field.dim)
    u = u if u is not None else ZeroField(field.dim)
    b = b if b is not None else ZeroField(field.dim)
    if weights is None and isinstance(field, ChaosVectorField):
        weights = field.space.weights
    q = np.asarray(weights, dtype=float) if weights is not None else np.ones(field.dim)

    x = sample_gaussian(field.dim, n, seed, workers=workers)
    times = _time_nodes(s, t, time_points)
    with np.errstate(all="ignore"):
        h_values = _integrate(np.stack([_h_integrand(u, r, x, theta) for r in times], axis=1), times)
        eta_values = _integrate(np.stack([_h_integrand(field, r, x, theta) for r in times], axis=1), times)
        gamma_h, stable_h = _stable(h_values, seed)
        gamma_eta, stable_eta = _stable(eta_values, seed)

        gamma_w, stable_w, worst_level = None, True, 1
        for m in range(1, field.dim + 1):
            w_values = _integrate(
                np.stack([_w_integrand(b, r, x, theta, q, m) for r in times], axis=1), times
            )
            level, level_stable = _stable(w_values, seed)
            stable_w = stable_w and level_stable
            if gamma_w is None or level.mean > gamma_w.mean:
                gamma_w, worst_level = level, m

    stable = stable_h and stable_w and stable_eta
    estimates = (gamma_h, gamma_w, gamma_eta)
    finite = stable and all(e.valid and math.isfinite(e.mean) for e in estimates)
    if not finite:
        logger.warning(
            f"[MOMENTS] theta={theta}: estimates unstable "
            f"(Gamma_H={gamma_h.mean:.4g}, Gamma_W={gamma_w.mean:.4g}, Gamma_eta={gamma_eta.mean:.4g})"
        )
    else:
        logger.info(f"[MOMENTS] theta={theta}: Gamma_H={gamma_h.mean:.4g} Gamma_W={gamma_w.mean:.4g}")
    return MomentDiagnostics(
        theta=theta,
        s=s,
        t=t,
        gamma_h=gamma_h,
        gamma_w=gamma_w,
        gamma_eta=gamma_eta,
        worst_level=worst_level,
        stable=stable,
        finite=finite,
    )


def two_part_bound(p: float, diagnostics: MomentDiagnostics) -> float:
    """e^(1/p) (1 + (2p - 2)/theta sqrt(Gamma_H Gamma_W))."""
    theta = diagnostics.theta
    product = diagnostics.gamma_h.mean * diagnostics.gamma_w.mean
    return math.exp(1.0 / p) * (1.0 + (2.0 * p - 2.0) / theta * math.sqrt(product))


def single_field_bound(p: float, diagnostics: MomentDiagnostics) -> float:
    """e^(1/p) (1 + (p - 1)/theta Gamma^eta), valid for |t - s| < theta/p."""
    return math.exp(1.0 / p) * (1.0 + (p - 1.0) / diagnostics.theta * diagnostics.gamma_eta.mean)
