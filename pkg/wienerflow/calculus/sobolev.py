"""First-order Sobolev norms and the Hermite-series counterexample."""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np
from prefect.logging import get_logger

from wienerflow.chaos import ChaosDomainError, ChaosPoly, GaussianSpace
from wienerflow.montecarlo import Estimate, sample_gaussian

from .ladder import gradient, partial

logger = get_logger("wienerflow.calculus")


class NormMode(str, Enum):
    H = "H"
    WEIGHTED = "weighted-W"


def weight_profile(name: str, dim: int) -> tuple[float, ...]:
    """q_n for n = 1..dim under a named profile."""
    match name:
        case "harmonic":
            return tuple(1.0 / n for n in range(1, dim + 1))
        case "inverse-square":
            return tuple(1.0 / n**2 for n in range(1, dim + 1))
        case "unit":
            return tuple(1.0 for _ in range(dim))
    raise ChaosDomainError(
        f"unknown weight profile {name!r}; expected harmonic, inverse-square or unit"
    )


def sobolev_norm(
    phi: ChaosPoly,
    p: float,
    mode: NormMode = NormMode.H,
    n_samples: int = 100_000,
    seed: int = 0,
) -> Estimate:
    """MC estimate of (E|phi|^p + E||grad phi||^p)^(1/p).

    The standard error of the p-th root comes from the delta method.
    """
    if p < 1:
        raise ChaosDomainError(f"exponent p must be >= 1, got {p}")
    mode = NormMode(mode)
    weights = phi.space.weights
    if mode is NormMode.WEIGHTED and weights is None:
        raise ChaosDomainError("weighted-W norm requested but the space has no weights")

    x = sample_gaussian(phi.space.dim, n_samples, seed)
    grad = gradient(phi).evaluate(x)
    if mode is NormMode.WEIGHTED:
        grad = grad * np.asarray(weights)
    values = np.abs(phi.evaluate(x)) ** p + np.linalg.norm(grad, axis=1) ** p
    moment = Estimate.from_values(values, seed)
    norm = moment.mean ** (1.0 / p)
    std_error = (norm / (p * moment.mean)) * moment.std_error if moment.mean > 0 else 0.0
    return Estimate(mean=norm, std_error=std_error, n=n_samples, seed=seed,
                    failures=moment.failures, valid=moment.valid)


@dataclass(frozen=True)
class CounterexampleRow:
    m: int
    h_norm_sq: float
    weighted_norm_sq: float


def counterexample_term(space: GaussianSpace, n: int) -> ChaosPoly:
    """H_{2n}(x_n) / (sqrt(n) log n), with x_n the n-th coordinate (1-based)."""
    return ChaosPoly.hermite(space, {n - 1: 2 * n}, 1.0 / (math.sqrt(n) * math.log(n)))


def hermite_counterexample_demo(m_max: int, weights: str | Sequence[float] = "harmonic") -> list[CounterexampleRow]:
    """Partial sums a_m = sum_{n=2}^m H_{2n}(x_n) / (sqrt(n) log n).

    For each m reports E||grad a_m||_H^2 and E||Q grad a_m||^2, both computed
    exactly from the chaos coefficients of grad a_m. The H column diverges
    like sum 2/(log n)^2 while square-summable weights make the second one
    converge.
    """
    if m_max < 2:
        raise ChaosDomainError(f"m_max must be >= 2, got {m_max}")
    q = weight_profile(weights, m_max) if isinstance(weights, str) else tuple(weights)
    if len(q) < m_max:
        raise ChaosDomainError(f"need {m_max} weights, got {len(q)}")
    space = GaussianSpace(m_max, 2 * m_max, q[:m_max])

    rows = []
    h_total = 0.0
    w_total = 0.0
    for n in range(2, m_max + 1):
        # terms live in distinct directions, so gradients are orthogonal
        component = partial(counterexample_term(space, n), n - 1)
        energy = component.l2_norm() ** 2
        h_total += energy
        w_total += q[n - 1] ** 2 * energy
        rows.append(CounterexampleRow(m=n, h_norm_sq=h_total, weighted_norm_sq=w_total))
    logger.info(
        f"[DEMO] m_max={m_max}: H column {h_total:.6g}, weighted column {w_total:.6g}"
    )
    return rows
