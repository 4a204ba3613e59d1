"""Spectral calculus of the number operator and the Ornstein-Uhlenbeck semigroup."""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from prefect.logging import get_logger
from scipy import integrate, special

from wienerflow.chaos import ChaosDomainError, ChaosField, ChaosPoly, MultiIndex
from wienerflow.montecarlo import Estimate, EstimatorError, sample_gaussian

logger = get_logger("wienerflow.calculus")


class SpectralKind(str, Enum):
    NUMBER_OP = "number_op"
    INVERSE_L = "inverse_L"
    RESOLVENT_POWER = "resolvent_power"
    OU_SEMIGROUP = "ou_semigroup"


@dataclass(frozen=True)
class SpectralFunction:
    """A function g of the number operator, acting on chaos degree k by g(k)."""

    kind: SpectralKind
    beta: float | None = None
    t: float | None = None

    def __post_init__(self):
        if self.kind is SpectralKind.RESOLVENT_POWER and not (self.beta and self.beta > 0):
            raise ChaosDomainError(f"resolvent power needs beta > 0, got {self.beta}")
        if self.kind is SpectralKind.OU_SEMIGROUP and (self.t is None or self.t < 0):
            raise ChaosDomainError(f"OU semigroup needs t >= 0, got {self.t}")

    @classmethod
    def number_op(cls) -> "SpectralFunction":
        return cls(SpectralKind.NUMBER_OP)

    @classmethod
    def inverse_l(cls) -> "SpectralFunction":
        return cls(SpectralKind.INVERSE_L)

    @classmethod
    def resolvent_power(cls, beta: float) -> "SpectralFunction":
        return cls(SpectralKind.RESOLVENT_POWER, beta=beta)

    @classmethod
    def ou_semigroup(cls, t: float) -> "SpectralFunction":
        return cls(SpectralKind.OU_SEMIGROUP, t=t)

    def multiplier(self, k: int) -> float:
        match self.kind:
            case SpectralKind.NUMBER_OP:
                return float(k)
            case SpectralKind.INVERSE_L:
                if k == 0:
                    raise ChaosDomainError("inverse_L is undefined on the constant chaos")
                return 1.0 / k
            case SpectralKind.RESOLVENT_POWER:
                return (1.0 + k) ** (-self.beta)
            case SpectralKind.OU_SEMIGROUP:
                return math.exp(-k * self.t)


def spectral_apply(p: ChaosPoly, f: SpectralFunction) -> ChaosPoly:
    """Multiply the coefficient at alpha by g(|alpha|)."""
    if f.kind is SpectralKind.INVERSE_L and MultiIndex.zero() in p.coeffs:
        raise ChaosDomainError(
            f"inverse_L needs a zero-mean input, got mean {p.mean!r}"
        )
    return ChaosPoly.from_coeffs(
        p.space, {alpha: f.multiplier(alpha.degree) * c for alpha, c in p.coeffs.items()}
    )


def spectral_apply_field(v: ChaosField, f: SpectralFunction) -> ChaosField:
    """Component-wise action on the chaos degree of each scalar component."""
    return v.map(lambda c: spectral_apply(c, f))


def resolvent_by_quadrature(k: float, beta: float) -> float:
    """(1 + k)^(-beta) from its Gamma-integral representation.

        (1 + k)^(-beta) = 1/Gamma(beta) int_0^inf t^(beta-1) e^(-t) e^(-k t) dt

    For beta < 1 the t^(beta-1) singularity is removed by t = u^(1/beta).
    """
    if beta <= 0:
        raise ChaosDomainError(f"beta must be > 0, got {beta}")
    if beta < 1:
        value, _ = integrate.quad(
            lambda u: math.exp(-(1.0 + k) * u ** (1.0 / beta)), 0.0, np.inf,
            epsabs=1e-13, epsrel=1e-12,
        )
        return value / (beta * special.gamma(beta))
    value, _ = integrate.quad(
        lambda t: t ** (beta - 1.0) * math.exp(-(1.0 + k) * t), 0.0, np.inf,
        epsabs=1e-13, epsrel=1e-12,
    )
    return value / special.gamma(beta)


def ou_mehler_mc(
    p: ChaosPoly,
    t: float,
    points: np.ndarray,
    n_samples: int,
    seed: int,
    antithetic: bool = True,
    workers: int = 1,
) -> list[Estimate]:
    """Mehler-formula Monte-Carlo estimate of (T_t p)(omega) at each point.

    Averages p(e^-t omega + sqrt(1 - e^-2t) w) over w ~ N(0, I); with
    ``antithetic`` each draw w is paired with -w and the pair mean is one
    sample. t = 0 returns p(omega) with zero standard error.
    """
    if t < 0:
        raise ChaosDomainError(f"t must be >= 0, got {t}")
    if n_samples < 2:
        raise EstimatorError(f"Mehler estimate needs at least 2 samples, got {n_samples}")
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if t == 0:
        exact = np.atleast_1d(p.evaluate(points))
        return [Estimate(mean=float(v), std_error=0.0, n=n_samples, seed=seed) for v in exact]

    a = math.exp(-t)
    b = math.sqrt(-math.expm1(-2.0 * t))
    noise = sample_gaussian(p.space.dim, n_samples, seed, workers=workers)
    estimates = []
    for omega in points:
        values = p.evaluate(a * omega + b * noise)
        if antithetic:
            values = 0.5 * (values + p.evaluate(a * omega - b * noise))
        estimates.append(Estimate.from_values(values, seed=seed))
    logger.info(f"[MEHLER] t={t:.4g}: {len(points)} point(s), N={n_samples}")
    return estimates
