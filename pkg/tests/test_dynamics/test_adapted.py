"""Tests for adaptedness of fields and flows."""

import numpy as np
import pytest

from wienerflow.dynamics import (
    FlowError,
    LinearField,
    RotationField,
    SolverOptions,
    adaptedness_check,
    field_is_adapted,
    filtration_level,
    integrate_flow,
)

LOWER = np.array([[0.5, 0.0, 0.0], [1.0, -0.2, 0.0], [0.3, 0.4, 0.1]])
RK4 = SolverOptions(method="rk4", steps=200)


class TestFiltrationLevel:
    """Tests for filtration_level."""

    @pytest.mark.parametrize(
        "theta,dim,level", [(0.5, 4, 2), (1.0, 3, 3), (0.1, 3, 1), (0.34, 3, 2), (0.75, 4, 3)]
    )
    def test_levels(self, theta, dim, level):
        """Level is ceil(theta * dim), at least one."""
        assert filtration_level(theta, dim) == level

    @pytest.mark.parametrize("theta", [0.0, 1.5])
    def test_theta_range(self, theta):
        """theta lies in (0, 1]."""
        with pytest.raises(FlowError):
            filtration_level(theta, 3)


class TestFieldIsAdapted:
    """Tests for field_is_adapted."""

    def test_lower_triangular(self):
        """Lower-triangular fields are adapted."""
        assert field_is_adapted(LinearField(LOWER))

    def test_rotation(self):
        """A rotation in the leading plane is not, but is adapted above it."""
        field = RotationField(3)
        assert not field_is_adapted(field)
        assert field_is_adapted(field, level=2)
        assert not field_is_adapted(field, level=1)


class TestAdaptednessCheck:
    """Tests for adaptedness_check."""

    def test_adapted_flow_is_insensitive(self):
        """Leading coordinates ignore perturbations of later ones."""
        field = LinearField(LOWER)
        x = np.random.default_rng(1).normal(size=(20, 3))
        flow = integrate_flow(field, 0.0, 1.0, x, RK4)
        report = adaptedness_check(field, flow, tolerance=1e-12)
        assert report.passed
        assert all(row.sensitivity == 0.0 for row in report.rows)
        assert [row.level for row in report.rows] == [1, 2, 3, 3]

    def test_rotation_flow_is_sensitive(self):
        """The rotation couples x0 to x1."""
        field = RotationField(3)
        x = np.random.default_rng(2).normal(size=(20, 3))
        flow = integrate_flow(field, 0.0, 1.0, x, RK4)
        report = adaptedness_check(field, flow, thetas=(0.34,), tolerance=1e-12)
        assert report.rows[0].passed
        report = adaptedness_check(field, flow, thetas=(0.25,), tolerance=1e-12)
        assert not report.passed
        assert report.rows[0].sensitivity > 0.1
