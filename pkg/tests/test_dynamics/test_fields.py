"""Tests for chaos-valued and closed-form vector fields."""

import math

import numpy as np
import pytest

from wienerflow.chaos import ChaosField, ChaosMatrix, ChaosPoly, GaussianSpace
from wienerflow.dynamics import (
    BlowupField,
    ChaosVectorField,
    FieldEvaluationError,
    LinearField,
    RotationField,
    TanhField,
    ZeroField,
    closed_form_field,
    constant_matrix_field,
    poly_functional,
)

SPACE = GaussianSpace(2, 3)
MATRIX = np.array([[0.5, -1.0], [0.25, 0.0]])


def _linear_chaos_field(matrix: np.ndarray) -> ChaosField:
    return ChaosField(
        SPACE,
        tuple(
            ChaosPoly.from_terms(SPACE, [([1, 0], matrix[i, 0]), ([0, 1], matrix[i, 1])])
            for i in range(2)
        ),
    )


class TestClosedFormFields:
    """Tests for the registry fields."""

    def test_tanh_divergence(self):
        """delta v = x tanh x - sech^2 x."""
        x = np.array([[0.3, 1.0], [-2.0, 0.0]])
        expected = x[:, 0] * np.tanh(x[:, 0]) - 1 / np.cosh(x[:, 0]) ** 2
        np.testing.assert_allclose(TanhField(2).divergence(0.0, x), expected)

    def test_tanh_flow_solves_ode(self):
        """d/dt of the closed-form flow is the velocity."""
        field = TanhField(1)
        x = np.array([[0.7], [-1.3]])
        h = 1e-6
        derivative = (field.flow_map(0.0, 0.5 + h, x) - field.flow_map(0.0, 0.5 - h, x)) / (2 * h)
        np.testing.assert_allclose(derivative, field.velocity(0.0, field.flow_map(0.0, 0.5, x)), atol=1e-8)

    def test_tanh_density_at_zero_time(self):
        """Lambda_{s,s} = 1."""
        np.testing.assert_allclose(TanhField(1).log_density(0.3, 0.3, np.array([[1.5]])), 0.0, atol=1e-15)

    def test_tanh_direction_checked(self):
        """The direction must be a valid coordinate."""
        with pytest.raises(FieldEvaluationError):
            TanhField(2, direction=2)

    def test_rotation_is_divergence_free(self):
        """The rotation field has zero divergence and an orthogonal flow."""
        field = RotationField(3, omega=2.0)
        x = np.random.default_rng(1).normal(size=(10, 3))
        np.testing.assert_allclose(field.divergence(0.0, x), 0.0, atol=1e-14)
        propagator = field.propagator(0.0, 0.4)
        np.testing.assert_allclose(propagator @ propagator.T, np.eye(3), atol=1e-14)

    def test_linear_jacobian(self):
        """The Jacobian of Mx is M at every point."""
        jac = LinearField(MATRIX).jacobian(0.0, np.zeros((4, 2)))
        assert jac.shape == (4, 2, 2)
        np.testing.assert_array_equal(jac[2], MATRIX)

    def test_blowup_flow_has_nan_past_blowup(self):
        """x1 / (1 - x1 t) is undefined after time 1/x1."""
        flowed = BlowupField(1).flow_map(0.0, 1.0, np.array([[0.5], [2.0], [-1.0]]))
        assert flowed[0, 0] == pytest.approx(1.0)
        assert math.isnan(flowed[1, 0])
        assert flowed[2, 0] == pytest.approx(-0.5)

    def test_zero_field(self):
        """The zero field has the identity flow."""
        x = np.ones((3, 2))
        field = ZeroField(2)
        np.testing.assert_array_equal(field.flow_map(0.0, 5.0, x), x)
        assert not field.dependency_pattern().any()
        assert field.is_representable()

    def test_registry(self):
        """Fields are built by name."""
        assert isinstance(closed_form_field("tanh", 2), TanhField)
        assert closed_form_field("rotation", 2, omega=3.0).omega == 3.0
        assert isinstance(closed_form_field("linear", 2, matrix=MATRIX), LinearField)

    @pytest.mark.parametrize(
        "name,params", [("spiral", {}), ("linear", {"matrix": np.eye(3)})]
    )
    def test_registry_errors(self, name, params):
        """Unknown names and mismatched matrices raise."""
        with pytest.raises(FieldEvaluationError):
            closed_form_field(name, 2, **params)

    def test_window(self):
        """Flows outside the time domain are refused."""
        field = TanhField(1, time_domain=(0.0, 1.0))
        field.check_window(0.0, 1.0)
        with pytest.raises(FieldEvaluationError):
            field.check_window(0.5, 1.5)

    def test_constant_matrix_field(self):
        """A constant A gives the linear field A^T x."""
        field = constant_matrix_field(ChaosMatrix.constant(SPACE, MATRIX))
        np.testing.assert_array_equal(field.matrix, MATRIX.T)


class TestChaosVectorField:
    """Tests for ChaosVectorField."""

    def test_matches_linear_field(self):
        """A linear chaos field agrees with LinearField pointwise."""
        chaos = ChaosVectorField.autonomous_field(_linear_chaos_field(MATRIX))
        linear = LinearField(MATRIX)
        x = np.random.default_rng(2).normal(size=(8, 2))
        np.testing.assert_allclose(chaos.velocity(0.0, x), linear.velocity(0.0, x), atol=1e-14)
        np.testing.assert_allclose(chaos.divergence(0.0, x), linear.divergence(0.0, x), atol=1e-13)
        np.testing.assert_allclose(chaos.jacobian(0.0, x), linear.jacobian(0.0, x), atol=1e-14)

    def test_linear_interpolation(self):
        """Between nodes the field is interpolated linearly."""
        field = ChaosVectorField(
            [0.0, 1.0], [ChaosField.constant(SPACE, [1.0, 0.0]), ChaosField.constant(SPACE, [3.0, 0.0])]
        )
        assert not field.autonomous
        np.testing.assert_allclose(field.velocity(0.5, np.zeros((1, 2))), [[2.0, 0.0]])
        assert field.field_at(0.25)[0].mean == pytest.approx(1.5)
        with pytest.raises(FieldEvaluationError):
            field.velocity(1.5, np.zeros((1, 2)))

    def test_nodes_must_increase(self):
        """Node times must be strictly increasing."""
        v = ChaosField.zero(SPACE)
        with pytest.raises(FieldEvaluationError):
            ChaosVectorField([1.0, 1.0], [v, v])

    def test_full_cap_divergence(self):
        """Divergences of full-cap fields do not overflow."""
        v = ChaosField(SPACE, (ChaosPoly.hermite(SPACE, {0: 3}), ChaosPoly.zero(SPACE)))
        field = ChaosVectorField.autonomous_field(v)
        x = np.array([[1.0, 0.0]])
        expected = x[0, 0] * v[0].evaluate(x) - math.sqrt(3) * ChaosPoly.hermite(SPACE, {0: 2}).evaluate(x)
        np.testing.assert_allclose(field.divergence(0.0, x), expected)

    def test_dependency_pattern_and_truncation(self):
        """The pattern follows the chaos support and truncation removes directions."""
        field = ChaosVectorField.autonomous_field(_linear_chaos_field(MATRIX))
        np.testing.assert_array_equal(field.dependency_pattern(), [[True, True], [True, False]])
        truncated = field.truncated(1)
        np.testing.assert_array_equal(truncated.dependency_pattern(), [[True, False], [False, False]])

    def test_poly_functional(self):
        """poly_functional evaluates a poly on a batch."""
        fn = poly_functional(ChaosPoly.coordinate(SPACE, 1, 2.0))
        np.testing.assert_array_equal(fn(np.array([[0.0, 1.0], [0.0, -1.0]])), [2.0, -2.0])
