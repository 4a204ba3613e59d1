"""Building blocks shared by the verification suites."""

import math

import numpy as np

from wienerflow.chaos import GaussianSpace
from wienerflow.dynamics import SolverOptions
from wienerflow.montecarlo import Estimate
from wienerflow.state import CheckRecord, RunConfig


def exact_check(name: str, value: float, tolerance: float, detail: str = "") -> CheckRecord:
    """Deterministic identity: passes when ``value`` <= ``tolerance``."""
    return CheckRecord(
        name=name,
        mode="exact",
        value=value,
        bound=tolerance,
        passed=math.isfinite(value) and value <= tolerance,
        detail=detail,
    )


def mc_check(name: str, estimate: Estimate, target: float, k: float = 4.0, detail: str = "") -> CheckRecord:
    """Monte-Carlo identity: |mean - target| within k standard errors."""
    deviation = abs(estimate.mean - target)
    bound = k * estimate.std_error + 1e-12 * max(1.0, abs(target))
    return CheckRecord(
        name=name,
        mode="mc",
        value=deviation,
        bound=bound,
        passed=estimate.valid and deviation <= bound,
        detail=detail or f"mean {estimate.mean:.6g} +- {estimate.std_error:.2g}, target {target:.6g}",
    )


def flag_check(name: str, passed: bool, mode: str = "exact", detail: str = "") -> CheckRecord:
    return CheckRecord(name=name, mode=mode, passed=passed, detail=detail)


def suite_space(config: RunConfig, default: GaussianSpace) -> GaussianSpace:
    """The configured space when the run sets one, otherwise the suite default."""
    if "space" in config.model_fields_set:
        return config.space.to_space()
    return default


def case_count(config: RunConfig, default: int) -> int:
    return config.verify.cases or default


def path_count(config: RunConfig, default: int = 1_000) -> int:
    """Batch size for pathwise checks; capped by the configured sample count."""
    return min(config.batch.n or default, default)


def solver_bound(options: SolverOptions, x: np.ndarray) -> float:
    """10x the solver tolerance, relative to the batch magnitude."""
    return 10.0 * options.tolerance * (1.0 + float(np.max(np.abs(x), initial=0.0)))
