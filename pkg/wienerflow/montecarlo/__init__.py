"""Gaussian sampling and Monte-Carlo estimators."""

from .sampling import BLOCK_SIZE, sample_at, sample_gaussian
from .estimators import (
    Estimate,
    EstimatorError,
    PushforwardPair,
    combined_std_error,
    estimate,
    estimate_gaussian,
    pushforward_pair,
)

__all__ = [
    "BLOCK_SIZE",
    "sample_at",
    "sample_gaussian",
    "Estimate",
    "EstimatorError",
    "PushforwardPair",
    "combined_std_error",
    "estimate",
    "estimate_gaussian",
    "pushforward_pair",
]
