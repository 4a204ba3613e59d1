"""Tests for counter-based Gaussian sampling."""

import numpy as np
import pytest

from wienerflow.montecarlo import BLOCK_SIZE, sample_at, sample_gaussian


class TestSampleGaussian:
    """Tests for sample_gaussian and sample_at."""

    def test_shape_and_determinism(self):
        """Same seed, same batch."""
        a = sample_gaussian(3, 100, seed=7)
        b = sample_gaussian(3, 100, seed=7)
        assert a.shape == (100, 3)
        np.testing.assert_array_equal(a, b)

    def test_seeds_differ(self):
        """Different seeds give different streams."""
        assert not np.array_equal(sample_gaussian(2, 10, seed=1), sample_gaussian(2, 10, seed=2))

    def test_offset_batches_concatenate(self):
        """Samples start..start+n-1 are a slice of the full stream, across blocks."""
        full = sample_gaussian(2, BLOCK_SIZE + 50, seed=3)
        part = sample_gaussian(2, 100, seed=3, start=BLOCK_SIZE - 50)
        np.testing.assert_array_equal(part, full[BLOCK_SIZE - 50 : BLOCK_SIZE + 50])

    def test_sample_at(self):
        """A single sample is regenerated from its index."""
        full = sample_gaussian(4, 20, seed=9)
        np.testing.assert_array_equal(sample_at(4, 13, seed=9), full[13])

    def test_workers_do_not_change_the_batch(self):
        """Threaded generation returns the same array."""
        n = 3 * BLOCK_SIZE + 17
        np.testing.assert_array_equal(
            sample_gaussian(2, n, seed=11, workers=4), sample_gaussian(2, n, seed=11)
        )

    def test_moments(self):
        """Samples look standard normal."""
        x = sample_gaussian(2, 40_000, seed=12)
        assert abs(x.mean()) < 0.02
        assert x.var() == pytest.approx(1.0, abs=0.03)

    @pytest.mark.parametrize("seed", [-1, 1 << 64])
    def test_seed_range(self, seed):
        """Seeds must be unsigned 64-bit integers."""
        with pytest.raises(ValueError):
            sample_gaussian(1, 1, seed=seed)

    def test_needs_samples(self):
        """n must be positive."""
        with pytest.raises(ValueError):
            sample_gaussian(1, 0, seed=0)
