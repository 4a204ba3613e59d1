"""Tests for Monte-Carlo estimators."""

import math

import numpy as np
import pytest

from wienerflow.montecarlo import (
    BLOCK_SIZE,
    Estimate,
    EstimatorError,
    combined_std_error,
    estimate,
    estimate_gaussian,
    pushforward_pair,
    sample_gaussian,
)


class TestEstimate:
    """Tests for Estimate."""

    def test_from_values(self):
        """Mean and standard error of a small sample."""
        est = Estimate.from_values(np.array([1.0, 2.0, 3.0, 4.0]), seed=5)
        assert est.mean == 2.5
        assert est.std_error == pytest.approx(np.std([1, 2, 3, 4], ddof=1) / 2)
        assert est.seed == 5
        assert est.valid

    def test_failures_counted(self):
        """Non-finite values are dropped and counted."""
        values = np.ones(10)
        values[3] = np.nan
        est = Estimate.from_values(values)
        assert est.failures == 1
        assert est.mean == 1.0
        # 10% failures is above the validity threshold
        assert not est.valid

    def test_all_failures(self):
        """An estimate with no finite value is invalid."""
        est = Estimate.from_values(np.array([np.inf, np.nan]))
        assert math.isnan(est.mean)
        assert not est.valid

    def test_within(self):
        """within() compares against k standard errors."""
        est = Estimate(mean=1.0, std_error=0.1, n=100)
        assert est.within(1.35)
        assert not est.within(1.45)
        assert est.within(1.45, atol=0.1)

    def test_combined_std_error(self):
        """Independent errors add in quadrature."""
        a = Estimate(mean=0.0, std_error=0.3, n=10)
        b = Estimate(mean=0.0, std_error=0.4, n=10)
        assert combined_std_error(a, b) == pytest.approx(0.5)


class TestEstimators:
    """Tests for estimate and estimate_gaussian."""

    def test_estimate_checks_shape(self):
        """The functional must return one value per sample."""
        with pytest.raises(EstimatorError):
            estimate(lambda x: x, np.zeros((5, 2)))

    def test_second_moment(self):
        """E[|X|^2] = dim."""
        est = estimate_gaussian(lambda x: np.sum(x**2, axis=1), 3, 50_000, seed=21)
        assert est.within(3.0, k=5.0)

    def test_streaming_matches_batch(self):
        """Block-wise merging equals the estimate over the whole batch."""
        n = 2 * BLOCK_SIZE + 100
        fn = lambda x: np.cos(x[:, 0]) + x[:, 1] ** 2
        streamed = estimate_gaussian(fn, 2, n, seed=22)
        batch = estimate(fn, sample_gaussian(2, n, seed=22), seed=22)
        assert streamed.mean == pytest.approx(batch.mean, rel=1e-12)
        assert streamed.std_error == pytest.approx(batch.std_error, rel=1e-9)

    def test_worker_count_is_irrelevant(self):
        """Results are bit-identical for any number of workers."""
        n = 3 * BLOCK_SIZE
        fn = lambda x: np.exp(x[:, 0])
        assert estimate_gaussian(fn, 1, n, seed=23, workers=3) == estimate_gaussian(fn, 1, n, seed=23)

    def test_needs_samples(self):
        """n must be positive."""
        with pytest.raises(EstimatorError):
            estimate_gaussian(lambda x: x[:, 0], 1, 0, seed=0)


class TestPushforwardPair:
    """Tests for pushforward_pair."""

    def test_identity_map_agrees_exactly(self):
        """T = id with Lambda = 1 gives a zero difference."""
        x = sample_gaussian(2, 1000, seed=31)
        pair = pushforward_pair(lambda y: y[:, 0] ** 2, x, x, np.zeros(1000), seed=31)
        assert pair.difference.mean == 0.0
        assert pair.agree()

    def test_shift_with_girsanov_density(self):
        """A shift by h pairs with Lambda(y) = exp(<h, y> - |h|^2 / 2)."""
        h = np.array([0.4, -0.2])
        x = sample_gaussian(2, 40_000, seed=32)
        log_density = x @ h - 0.5 * h @ h
        f = lambda y: y[:, 0] + y[:, 1] ** 2
        pair = pushforward_pair(f, x, x + h, log_density, seed=32)
        assert pair.agree(k=5.0)
