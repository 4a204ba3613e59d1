"""Tests for the command bodies behind the CLI."""
import math

import numpy as np
import pytest

from wienerflow.blocks import EngineConfig
from wienerflow.chaos import ChaosField, ChaosPoly, GaussianSpace
from wienerflow.chaos.serialization import dump_file
from wienerflow.experiments import (
    demo_experiment,
    flow_experiment,
    hodge_experiment,
    pde_experiment,
    verify_experiment,
)
from wienerflow.hodge import HodgeBundle
from wienerflow.state import ConfigError, RunConfig


def resolved(document: dict) -> RunConfig:
    return RunConfig.model_validate(document).resolved(EngineConfig(), seed=5)


class TestVerifyExperiment:
    """Tests for verify_experiment."""

    def test_report_names_suite(self):
        """The report records the suite and its checks."""
        outcome = verify_experiment("duality", resolved({"verify": {"cases": 2}}), EngineConfig())
        assert outcome.report.command == "verify duality"
        assert outcome.passed
        assert outcome.tables == {}


class TestHodgeExperiment:
    """Tests for hodge_experiment."""

    @pytest.fixture
    def field_file(self, tmp_path):
        # identity plus a rotation: gradient part x, divergence-free part (-x2, x1)
        space = GaussianSpace(2, 3)
        x1, x2 = ChaosPoly.coordinate(space, 0), ChaosPoly.coordinate(space, 1)
        path = tmp_path / "v.json"
        dump_file(ChaosField(space, (x1 - x2, x2 + x1)), path)
        return str(path)

    def test_decomposes_file(self, field_file):
        """Both parts are recovered and every identity holds."""
        outcome = hodge_experiment(field_file, resolved({}), EngineConfig())
        assert outcome.passed
        assert outcome.report.results["v0_norm"] == pytest.approx(math.sqrt(2.0))
        assert outcome.report.results["ve_norm"] == pytest.approx(math.sqrt(2.0))
        assert outcome.report.results["psi_degree"] == 2

    def test_bundle_document(self, field_file):
        """The bundle carries the antisymmetric representation."""
        outcome = hodge_experiment(field_file, resolved({}), EngineConfig())
        bundle = outcome.documents["bundle"]
        assert isinstance(bundle, HodgeBundle)
        assert bundle.A is not None

    def test_rejects_polynomial(self, tmp_path):
        """A polynomial document cannot be decomposed."""
        path = tmp_path / "p.json"
        dump_file(ChaosPoly.constant(GaussianSpace(2, 2), 1.0), path)
        with pytest.raises(ConfigError, match="expected a field"):
            hodge_experiment(str(path), resolved({}), EngineConfig())


class TestFlowExperiment:
    """Tests for flow_experiment."""

    def test_rotation_flow(self):
        """Rotation passes density, reversibility and flow-law checks."""
        config = resolved(
            {
                "field": {"name": "rotation"},
                "checks": ["density", "reversibility", "flow-law"],
                "batch": {"n": 40},
            }
        )
        outcome = flow_experiment(config, EngineConfig())
        assert outcome.passed, [c for c in outcome.report.checks if not c.passed]
        assert outcome.report.results["field"] == "rotation"
        assert outcome.report.results["samples"] == 40
        trajectories = outcome.tables["trajectories"]
        assert trajectories.columns == ["sample", "t", "x1", "x2"]
        assert trajectories.rows.shape == (40 * 11, 4)
        assert "densities" in outcome.tables

    def test_duplicate_checks_run_once(self):
        """Repeated check names are not run twice."""
        config = resolved({"field": {"name": "rotation"}, "checks": ["reversibility", "reversibility"], "batch": {"n": 10}})
        outcome = flow_experiment(config, EngineConfig())
        assert len(outcome.report.checks) == 1

    def test_galerkin_needs_chaos_field(self):
        """Galerkin truncation on a closed-form field is reported as failed."""
        config = resolved({"field": {"name": "rotation"}, "checks": ["galerkin"], "batch": {"n": 10}})
        outcome = flow_experiment(config, EngineConfig())
        assert not outcome.passed
        assert outcome.galerkin is None


class TestPdeExperiment:
    """Tests for pde_experiment."""

    def test_constant_rotation(self):
        """The default antisymmetric matrix solves the transport equation."""
        outcome = pde_experiment(resolved({"batch": {"n": 20}, "pde": {"t_grid": 5}}), EngineConfig())
        assert outcome.passed, [c for c in outcome.report.checks if not c.passed]
        assert outcome.report.results["constant_a"] is True
        assert len(outcome.report.checks) == 4
        residuals = outcome.tables["residuals"]
        assert residuals.rows.shape == (5, 5)
        assert outcome.transport is not None

    def test_rejects_symmetric_matrix(self):
        """A must be antisymmetric."""
        with pytest.raises(ConfigError, match="antisymmetric"):
            pde_experiment(resolved({"pde": {"matrix": [[1.0, 0.0], [0.0, 1.0]]}}), EngineConfig())

    def test_rejects_non_square(self):
        """A must be square."""
        with pytest.raises(ConfigError, match="square"):
            pde_experiment(resolved({"pde": {"matrix": [[0.0, 1.0]]}}), EngineConfig())


class TestDemoExperiment:
    """Tests for demo_experiment."""

    def test_partial_sums(self):
        """Both columns match direct summation."""
        outcome = demo_experiment(resolved({"demo": {"m_max": 50}}), EngineConfig())
        assert outcome.passed
        n = np.arange(2, 51)
        expected = float(np.sum(2.0 / np.log(n) ** 2))
        assert outcome.report.results["h_norm_sq"] == pytest.approx(expected, rel=1e-10)
        assert len(outcome.demo) == 49
        assert outcome.tables["counterexample"].rows.shape == (49, 3)

    def test_weighted_column_smaller(self):
        """Harmonic weights shrink the weighted column."""
        outcome = demo_experiment(resolved({"demo": {"m_max": 30}}), EngineConfig())
        results = outcome.report.results
        assert results["weighted_norm_sq"] < results["h_norm_sq"]

    def test_unknown_weights(self):
        """Unknown profiles are configuration errors."""
        with pytest.raises(ConfigError, match="demo.weights"):
            demo_experiment(resolved({"demo": {"m_max": 10, "weights": "cubic"}}), EngineConfig())
