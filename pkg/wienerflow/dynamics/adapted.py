"""Adaptedness of fields and flows to the leading-coordinate filtration."""

import math
from dataclasses import dataclass, field as dataclass_field
from typing import Sequence

import numpy as np
from prefect.logging import get_logger

from .fields import FlowError, VectorField
from .integrator import FlowResult, integrate_flow

logger = get_logger("wienerflow.dynamics")


def filtration_level(theta: float, dim: int) -> int:
    """Pi^theta keeps the first ceil(theta * dim) coordinates."""
    if not 0 < theta <= 1:
        raise FlowError(f"theta must lie in (0, 1], got {theta}")
    return min(max(math.ceil(theta * dim - 1e-12), 1), dim)


def field_is_adapted(field: VectorField, level: int | None = None) -> bool:
    """Without ``level``: component i depends only on directions j <= i.

    With ``level`` k: components below k depend only on directions below k.
    """
    pattern = field.dependency_pattern()
    if level is None:
        return not np.triu(pattern, k=1).any()
    return not pattern[:level, level:].any()


@dataclass
class AdaptednessRow:
    theta: float
    level: int
    field_adapted: bool
    sensitivity: float
    passed: bool


@dataclass
class AdaptednessReport:
    field_adapted: bool
    tolerance: float
    rows: list[AdaptednessRow] = dataclass_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.field_adapted and all(row.passed for row in self.rows)


def adaptedness_check(
    field: VectorField,
    flow: FlowResult,
    thetas: Sequence[float] = (0.25, 0.5, 0.75, 1.0),
    perturbation: float = 1.0,
    tolerance: float | None = None,
) -> AdaptednessReport:
    """Field-level pattern test plus a flow sensitivity run per theta.

    The rerun restarts ``flow`` with every start coordinate at or above the
    level shifted by ``perturbation`` and measures how far the coordinates
    below the level move at the endpoint.
    """
    tolerance = 100.0 * flow.options.tolerance if tolerance is None else tolerance
    report = AdaptednessReport(field_adapted=field_is_adapted(field), tolerance=tolerance)
    keep = ~flow.failed
    for theta in thetas:
        level = filtration_level(theta, field.dim)
        sensitivity = 0.0
        if level < field.dim and keep.any():
            shifted = flow.sample_points[keep].copy()
            shifted[:, level:] += perturbation
            shifted_flow = integrate_flow(field, flow.s, flow.t, shifted, flow.options, grid=flow.times)
            ok = ~shifted_flow.failed
            if ok.any():
                deviation = shifted_flow.endpoints[ok, :level] - flow.endpoints[keep][ok, :level]
                sensitivity = float(np.max(np.abs(deviation)))
        row = AdaptednessRow(
            theta=theta,
            level=level,
            field_adapted=field_is_adapted(field, level),
            sensitivity=sensitivity,
            passed=sensitivity <= tolerance,
        )
        logger.info(f"[ADAPTED] theta={theta} level={level}: sensitivity {sensitivity:.3e}")
        report.rows.append(row)
    return report
