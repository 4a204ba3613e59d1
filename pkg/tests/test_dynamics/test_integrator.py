"""Tests for batched flow integration."""

import numpy as np
import pytest

from wienerflow.dynamics import (
    BlowupField,
    FlowError,
    LinearField,
    RotationField,
    SolverMethod,
    SolverOptions,
    TanhField,
    integrate_flow,
)

MATRIX = np.array([[0.2, -1.0], [0.7, -0.1]])


def _points(n: int = 20, dim: int = 2, seed: int = 0) -> np.ndarray:
    return np.random.default_rng(seed).normal(size=(n, dim))


class TestSolverOptions:
    """Tests for SolverOptions."""

    def test_method_from_string(self):
        """Methods may be given by value."""
        assert SolverOptions(method="rk4").method is SolverMethod.RK4

    def test_tolerance(self):
        """The nominal tolerance is the looser of atol and rtol."""
        assert SolverOptions(atol=1e-8, rtol=1e-6).tolerance == 1e-6
        assert SolverOptions(method="rk4", atol=1e-12).tolerance == 1e-9

    def test_positive_steps(self):
        """Step and chunk counts must be positive."""
        with pytest.raises(FlowError):
            SolverOptions(steps=0)


class TestIntegrateFlow:
    """Tests for integrate_flow."""

    @pytest.mark.parametrize("method", ["rk45", "rk4"])
    def test_linear_flow_matches_expm(self, method):
        """Both solvers reproduce expm(tM) x."""
        field = LinearField(MATRIX)
        x = _points()
        result = integrate_flow(field, 0.0, 1.5, x, SolverOptions(method=method))
        np.testing.assert_allclose(result.endpoints, field.flow_map(0.0, 1.5, x), atol=1e-7)
        assert result.success

    def test_trajectories_on_grid(self):
        """An integer grid gives evenly spaced snapshots."""
        field = RotationField(2)
        x = _points(5)
        result = integrate_flow(field, 0.0, 1.0, x, grid=11)
        assert result.trajectories.shape == (5, 11, 2)
        np.testing.assert_allclose(result.times, np.linspace(0.0, 1.0, 11))
        np.testing.assert_array_equal(result.trajectories[:, 0], x)
        np.testing.assert_allclose(result.trajectories[:, 5], field.flow_map(0.0, 0.5, x), atol=1e-7)

    def test_backward_flow_inverts_forward(self):
        """T_{t,s} undoes T_{s,t}."""
        field = TanhField(2)
        x = _points(10)
        forward = integrate_flow(field, 0.0, 1.0, x)
        back = integrate_flow(field, 1.0, 0.0, forward.endpoints)
        np.testing.assert_allclose(back.endpoints, x, atol=1e-7)

    def test_zero_length_flow(self):
        """s = t returns the start points."""
        x = _points(3)
        result = integrate_flow(TanhField(2), 0.4, 0.4, x, with_log_density=True)
        np.testing.assert_array_equal(result.endpoints, x)
        np.testing.assert_array_equal(result.log_density, 0.0)

    def test_variational_channel(self):
        """The Jacobian channel is the propagator of a linear field."""
        field = LinearField(MATRIX)
        result = integrate_flow(field, 0.0, 1.0, _points(4), with_jacobian=True)
        for jac in result.jacobians:
            np.testing.assert_allclose(jac, field.propagator(0.0, 1.0), atol=1e-7)
        assert result.jacobian_path.shape == (4, 2, 2, 2)

    def test_log_density_channel(self):
        """The divergence integral is log Lambda at the endpoint."""
        field = TanhField(1)
        result = integrate_flow(field, 0.0, 1.0, _points(10, dim=1), with_log_density=True)
        expected = field.log_density(0.0, 1.0, result.endpoints)
        np.testing.assert_allclose(result.log_density, expected, atol=1e-6)
        np.testing.assert_allclose(result.density, np.exp(expected), rtol=1e-5)

    def test_blowup_samples_flagged(self):
        """Samples that blow up are marked failed; the rest are accurate."""
        field = BlowupField(1)
        x = np.array([[2.0], [-1.0], [0.5]])
        result = integrate_flow(field, 0.0, 1.0, x)
        np.testing.assert_array_equal(result.failed, [True, False, False])
        assert np.all(np.isnan(result.trajectories[0]))
        np.testing.assert_allclose(result.endpoints[1:], field.flow_map(0.0, 1.0, x[1:]), rtol=1e-6)
        assert not result.success

    def test_grid_must_span_interval(self):
        """Explicit grids run from s to t."""
        with pytest.raises(FlowError):
            integrate_flow(TanhField(1), 0.0, 1.0, _points(2, dim=1), grid=np.array([0.0, 0.5]))

    def test_start_points_shape(self):
        """Start points must match the field dimension."""
        with pytest.raises(FlowError):
            integrate_flow(TanhField(2), 0.0, 1.0, _points(2, dim=3))
