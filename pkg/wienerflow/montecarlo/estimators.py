"""Monte-Carlo estimators with standard errors and failure accounting."""

import math
from typing import Callable

import numpy as np
from prefect.logging import get_logger
from pydantic import BaseModel, Field

from .sampling import gaussian_block, map_blocks

logger = get_logger("wienerflow.montecarlo")

# fraction of non-finite pointwise values above which an estimate is invalid
MAX_FAILURE_RATE = 0.01


class EstimatorError(Exception):
    """An estimator was called with an unusable sample layout."""

    pass


class Estimate(BaseModel):
    """Sample mean with its standard error and provenance."""

    mean: float
    std_error: float = Field(ge=0.0)
    n: int
    seed: int | None = None
    failures: int = 0
    valid: bool = True

    @classmethod
    def from_values(cls, values: np.ndarray, seed: int | None = None) -> "Estimate":
        values = np.asarray(values, dtype=float).ravel()
        finite = np.isfinite(values)
        failures = int(values.size - finite.sum())
        kept = values[finite]
        if kept.size == 0:
            return cls(mean=math.nan, std_error=0.0, n=values.size, seed=seed,
                       failures=failures, valid=False)
        std_error = float(kept.std(ddof=1) / math.sqrt(kept.size)) if kept.size > 1 else 0.0
        valid = failures <= MAX_FAILURE_RATE * values.size
        if failures:
            logger.warning(f"[MC] {failures}/{values.size} pointwise failures")
        return cls(mean=float(kept.mean()), std_error=std_error, n=values.size,
                   seed=seed, failures=failures, valid=valid)

    def within(self, value: float, k: float = 4.0, atol: float = 0.0) -> bool:
        """|mean - value| <= k standard errors (+ atol)."""
        return abs(self.mean - value) <= k * self.std_error + atol


def combined_std_error(*estimates: Estimate) -> float:
    return math.sqrt(sum(e.std_error**2 for e in estimates))


def estimate(fn: Callable[[np.ndarray], np.ndarray], batch: np.ndarray, seed: int | None = None) -> Estimate:
    """Mean of a vectorized pointwise functional over a sample batch."""
    batch = np.atleast_2d(np.asarray(batch, dtype=float))
    with np.errstate(all="ignore"):
        values = np.asarray(fn(batch), dtype=float)
    if values.shape != (batch.shape[0],):
        raise EstimatorError(
            f"functional returned shape {values.shape}, expected ({batch.shape[0]},)"
        )
    return Estimate.from_values(values, seed=seed)


def estimate_gaussian(
    fn: Callable[[np.ndarray], np.ndarray],
    dim: int,
    n: int,
    seed: int,
    workers: int = 1,
) -> Estimate:
    """E[fn(X)], X ~ N(0, I_dim), evaluated block by block.

    Blocks are reduced to (count, mean, M2, failures) and merged in block
    order, so the result is bit-identical for any worker count.
    """
    if n < 1:
        raise EstimatorError(f"need at least one sample, got {n}")

    def reduce_block(block: int, lo: int, hi: int) -> tuple[int, float, float, int]:
        x = gaussian_block(seed, block, dim)[lo:hi]
        with np.errstate(all="ignore"):
            values = np.asarray(fn(x), dtype=float)
        finite = values[np.isfinite(values)]
        if finite.size == 0:
            return 0, 0.0, 0.0, int(values.size)
        mean = float(finite.mean())
        m2 = float(((finite - mean) ** 2).sum())
        return int(finite.size), mean, m2, int(values.size - finite.size)

    count, mean, m2, failures = 0, 0.0, 0.0, 0
    for c, m, s, f in map_blocks(reduce_block, 0, n, workers):
        failures += f
        if c == 0:
            continue
        total = count + c
        delta = m - mean
        mean += delta * c / total
        m2 += s + delta * delta * count * c / total
        count = total

    if count == 0:
        return Estimate(mean=math.nan, std_error=0.0, n=n, seed=seed, failures=failures, valid=False)
    std_error = math.sqrt(m2 / (count - 1) / count) if count > 1 else 0.0
    if failures:
        logger.warning(f"[MC] {failures}/{n} pointwise failures")
    return Estimate(
        mean=mean,
        std_error=std_error,
        n=n,
        seed=seed,
        failures=failures,
        valid=failures <= MAX_FAILURE_RATE * n,
    )


class PushforwardPair(BaseModel):
    """Both sides of E[f(T x)] = E[f(y) Lambda(y)] and their difference."""

    pushed: Estimate
    weighted: Estimate
    difference: Estimate

    def agree(self, k: float = 4.0) -> bool:
        return self.difference.valid and self.difference.within(0.0, k)


def pushforward_pair(
    f: Callable[[np.ndarray], np.ndarray],
    start_points: np.ndarray,
    mapped_points: np.ndarray,
    log_density: np.ndarray,
    seed: int | None = None,
) -> PushforwardPair:
    """Change-of-variables check on common random numbers.

    ``mapped_points[n] = T(start_points[n])`` and ``log_density[n]`` is
    log Lambda at ``start_points[n]``. The difference estimate uses the
    per-sample difference, so its standard error accounts for correlation.
    """
    with np.errstate(all="ignore"):
        pushed = np.asarray(f(mapped_points), dtype=float)
        weighted = np.asarray(f(start_points), dtype=float) * np.exp(log_density)
    return PushforwardPair(
        pushed=Estimate.from_values(pushed, seed),
        weighted=Estimate.from_values(weighted, seed),
        difference=Estimate.from_values(pushed - weighted, seed),
    )
