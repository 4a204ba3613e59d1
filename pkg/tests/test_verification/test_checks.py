"""Tests for the check builders shared by the suites."""
import math

import numpy as np
import pytest

from wienerflow.chaos import GaussianSpace
from wienerflow.dynamics import SolverMethod, SolverOptions
from wienerflow.montecarlo import Estimate
from wienerflow.state import RunConfig
from wienerflow.verification.checks import (
    case_count,
    exact_check,
    flag_check,
    mc_check,
    path_count,
    solver_bound,
    suite_space,
)


class TestExactCheck:
    """Tests for exact_check."""

    def test_within_tolerance(self):
        """A value at the tolerance passes."""
        record = exact_check("identity", 1e-12, 1e-12)
        assert record.passed
        assert record.mode == "exact"
        assert record.bound == 1e-12

    def test_above_tolerance(self):
        """A value above the tolerance fails."""
        assert not exact_check("identity", 1e-9, 1e-12).passed

    def test_nan_fails(self):
        """A NaN residual never passes."""
        assert not exact_check("identity", math.nan, 1.0).passed

    def test_zero_tolerance(self):
        """Zero tolerance accepts only an exact zero."""
        assert exact_check("exact", 0.0, 0.0).passed
        assert not exact_check("exact", 1e-300, 0.0).passed


class TestMcCheck:
    """Tests for mc_check."""

    def test_within_standard_errors(self):
        """Deviation inside k standard errors passes."""
        estimate = Estimate(mean=1.03, std_error=0.01, n=100, seed=0)
        record = mc_check("mean", estimate, 1.0, k=4.0)
        assert record.passed
        assert record.mode == "mc"
        assert record.value == pytest.approx(0.03)

    def test_outside_standard_errors(self):
        """Deviation beyond k standard errors fails."""
        estimate = Estimate(mean=1.05, std_error=0.01, n=100, seed=0)
        assert not mc_check("mean", estimate, 1.0, k=4.0).passed

    def test_zero_error_exact_match(self):
        """A zero-variance estimate passes only at the target."""
        assert mc_check("const", Estimate(mean=2.0, std_error=0.0, n=10, seed=0), 2.0).passed
        assert not mc_check("const", Estimate(mean=2.1, std_error=0.0, n=10, seed=0), 2.0).passed

    def test_detail_mentions_target(self):
        """Default detail reports mean and target."""
        record = mc_check("mean", Estimate(mean=1.0, std_error=0.1, n=10, seed=0), 1.0)
        assert "target" in record.detail


class TestFlagCheck:
    """Tests for flag_check."""

    def test_carries_flag(self):
        """The record passes exactly when the flag is set."""
        assert flag_check("flag", True).passed
        record = flag_check("flag", False, mode="mc", detail="why")
        assert not record.passed
        assert record.mode == "mc"
        assert record.value is None
        assert record.detail == "why"


class TestCounts:
    """Tests for case_count, path_count and suite_space."""

    def test_case_count_default(self):
        """Unset verify.cases keeps the suite default."""
        assert case_count(RunConfig(), 25) == 25

    def test_case_count_override(self):
        """verify.cases overrides the suite default."""
        config = RunConfig.model_validate({"verify": {"cases": 3}})
        assert case_count(config, 25) == 3

    def test_path_count_caps(self):
        """The configured sample count is capped at the default."""
        assert path_count(RunConfig.model_validate({"batch": {"n": 100000}})) == 1000
        assert path_count(RunConfig.model_validate({"batch": {"n": 50}})) == 50
        assert path_count(RunConfig()) == 1000

    def test_suite_space_default(self):
        """Without a space section the suite default is used."""
        default = GaussianSpace(3, 5)
        assert suite_space(RunConfig(), default) is default

    def test_suite_space_configured(self):
        """An explicit space section wins."""
        config = RunConfig.model_validate({"space": {"dim": 4, "degree_cap": 2}})
        space = suite_space(config, GaussianSpace(3, 5))
        assert space.dim == 4
        assert space.degree_cap == 2


class TestSolverBound:
    """Tests for solver_bound."""

    def test_scales_with_batch(self):
        """Ten times the tolerance, relative to the largest coordinate."""
        options = SolverOptions(method=SolverMethod.RK45, atol=1e-9, rtol=1e-8)
        x = np.array([[1.0, -3.0], [0.5, 2.0]])
        assert solver_bound(options, x) == pytest.approx(10.0 * 1e-8 * 4.0)

    def test_empty_batch(self):
        """An empty batch uses magnitude zero."""
        options = SolverOptions(method=SolverMethod.RK45, atol=1e-9, rtol=1e-9)
        assert solver_bound(options, np.zeros((0, 2))) == pytest.approx(1e-8)
