"""Tests for spectral calculus of the number operator."""

import math

import numpy as np
import pytest

from wienerflow.calculus import (
    SpectralFunction,
    divergence,
    gradient,
    ou_mehler_mc,
    resolvent_by_quadrature,
    spectral_apply,
    spectral_apply_field,
)
from wienerflow.chaos import ChaosDomainError, ChaosField, ChaosPoly, GaussianSpace, MultiIndex
from wienerflow.chaos.random import random_poly
from wienerflow.montecarlo import EstimatorError

SPACE = GaussianSpace(2, 4)


class TestSpectralApply:
    """Tests for spectral_apply."""

    def test_number_operator_is_delta_grad(self):
        """N phi = delta grad phi."""
        phi = random_poly(np.random.default_rng(21), SPACE, terms=6)
        assert spectral_apply(phi, SpectralFunction.number_op()).allclose(divergence(gradient(phi)))

    def test_semigroup_scales_by_degree(self):
        """T_t H_alpha = e^(-|alpha| t) H_alpha."""
        phi = ChaosPoly.from_terms(SPACE, [([0, 0], 1.0), ([2, 1], 1.0)])
        result = spectral_apply(phi, SpectralFunction.ou_semigroup(0.5))
        assert result.mean == 1.0
        assert result.coefficient(MultiIndex.from_dense([2, 1])) == pytest.approx(math.exp(-1.5))

    def test_inverse_l_needs_zero_mean(self):
        """inverse_L rejects a nonzero constant term."""
        with pytest.raises(ChaosDomainError):
            spectral_apply(ChaosPoly.constant(SPACE, 1.0), SpectralFunction.inverse_l())

    def test_inverse_l_inverts_number_operator(self):
        """inverse_L undoes N on zero-mean inputs."""
        phi = random_poly(np.random.default_rng(22), SPACE, terms=6, zero_mean=True)
        back = spectral_apply(spectral_apply(phi, SpectralFunction.number_op()), SpectralFunction.inverse_l())
        assert back.allclose(phi)

    def test_field_version(self):
        """Fields are transformed component by component."""
        v = ChaosField.identity(SPACE)
        result = spectral_apply_field(v, SpectralFunction.resolvent_power(1.0))
        assert result[0].coefficient(MultiIndex.unit(0)) == 0.5

    @pytest.mark.parametrize(
        "build",
        [lambda: SpectralFunction.resolvent_power(0.0), lambda: SpectralFunction.ou_semigroup(-1.0)],
    )
    def test_invalid_parameters(self, build):
        """Parameters outside the domain raise."""
        with pytest.raises(ChaosDomainError):
            build()


class TestResolventQuadrature:
    """Tests for the Gamma-integral representation."""

    @pytest.mark.parametrize("k", [0, 1, 3, 7])
    @pytest.mark.parametrize("beta", [0.5, 1.0, 2.5])
    def test_matches_closed_form(self, k, beta):
        """Quadrature reproduces (1 + k)^(-beta)."""
        assert resolvent_by_quadrature(k, beta) == pytest.approx((1 + k) ** (-beta), rel=1e-9)

    def test_beta_must_be_positive(self):
        """beta <= 0 raises."""
        with pytest.raises(ChaosDomainError):
            resolvent_by_quadrature(1, 0.0)


class TestMehler:
    """Tests for the Mehler-formula Monte-Carlo estimator."""

    def test_time_zero_is_exact(self):
        """t = 0 returns p(omega) with zero error."""
        p = ChaosPoly.hermite(SPACE, {0: 2})
        [est] = ou_mehler_mc(p, 0.0, np.array([[1.0, 0.0]]), 100, seed=1)
        assert est.mean == pytest.approx(p.evaluate(np.array([1.0, 0.0])))
        assert est.std_error == 0.0

    def test_antithetic_is_exact_on_linear(self):
        """Antithetic pairs cancel the noise of a linear functional."""
        p = ChaosPoly.coordinate(SPACE, 0)
        [est] = ou_mehler_mc(p, 0.7, np.array([[2.0, -1.0]]), 64, seed=2)
        assert est.mean == pytest.approx(2.0 * math.exp(-0.7), abs=1e-12)
        assert est.std_error == pytest.approx(0.0, abs=1e-12)

    def test_matches_spectral_semigroup(self):
        """MC agrees with the exact semigroup within its error."""
        p = ChaosPoly.from_terms(SPACE, [([2, 0], 1.0), ([1, 2], -0.5)])
        points = np.array([[0.3, -1.2], [1.5, 0.4]])
        exact = spectral_apply(p, SpectralFunction.ou_semigroup(0.4)).evaluate(points)
        estimates = ou_mehler_mc(p, 0.4, points, 20_000, seed=3)
        for est, value in zip(estimates, exact):
            assert est.within(value, k=5.0)

    def test_affine_estimate_needs_roundoff_floor(self):
        """An affine functional is estimated to roundoff, so only an absolute floor can compare it."""
        p = ChaosPoly.from_terms(SPACE, [([1, 0], 0.7), ([0, 1], -1.3), ([0, 0], 0.4)])
        point = np.array([[0.3, -1.1]])
        exact = float(np.atleast_1d(spectral_apply(p, SpectralFunction.ou_semigroup(0.37)).evaluate(point))[0])
        [est] = ou_mehler_mc(p, 0.37, point, 20_000, seed=3)
        assert est.std_error < 1e-12
        assert est.within(exact, k=4.0, atol=1e-12 * max(1.0, abs(exact)))

    def test_rejects_bad_arguments(self):
        """Negative time and tiny batches raise."""
        p = ChaosPoly.coordinate(SPACE, 0)
        with pytest.raises(ChaosDomainError):
            ou_mehler_mc(p, -0.1, np.zeros((1, 2)), 10, seed=0)
        with pytest.raises(EstimatorError):
            ou_mehler_mc(p, 0.1, np.zeros((1, 2)), 1, seed=0)
