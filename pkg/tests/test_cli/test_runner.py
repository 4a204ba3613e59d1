"""Tests for the command runner and its outputs."""
import json
from unittest.mock import AsyncMock, patch

import numpy as np
import pytest

from wienerflow.blocks import EngineConfig
from wienerflow.experiments import CsvTable, Outcome
from wienerflow.runner import EXIT_FAILED, EXIT_PASSED, EXIT_USAGE, run, write_outputs
from wienerflow.state import CheckRecord, RunConfig, RunReport


def outcome(passed: bool = True) -> Outcome:
    report = RunReport(
        command="verify duality",
        config=RunConfig(),
        checks=[CheckRecord(name="duality", mode="exact", value=0.0, bound=1e-12, passed=passed)],
    )
    table = CsvTable(["m", "value"], np.array([[1.0, 0.5], [2.0, 0.25]]))
    return Outcome(report, tables={"values": table})


class TestWriteOutputs:
    """Tests for write_outputs."""

    def test_json_only(self, tmp_path):
        """json format writes the report alone."""
        written = write_outputs(tmp_path / "out", outcome(), "json")
        assert [p.name for p in written] == ["report.json"]
        document = json.loads((tmp_path / "out" / "report.json").read_text())
        assert document["command"] == "verify duality"
        assert document["passed"] is True

    def test_csv_tables(self, tmp_path):
        """csv format adds one file per table with a header line."""
        write_outputs(tmp_path, outcome(), "csv")
        lines = (tmp_path / "values.csv").read_text().splitlines()
        assert lines[0] == "m,value"
        assert len(lines) == 3


class TestRun:
    """Tests for run exit codes."""

    @pytest.mark.anyio
    async def test_unknown_suite(self):
        """Unknown suites are usage errors."""
        assert await run("verify", target="nope", engine=EngineConfig()) == EXIT_USAGE

    @pytest.mark.anyio
    async def test_verify_needs_suite(self):
        """verify without a suite is a usage error."""
        assert await run("verify", engine=EngineConfig()) == EXIT_USAGE

    @pytest.mark.anyio
    async def test_missing_config(self, tmp_path):
        """A missing config file is a usage error."""
        code = await run("flow", config_path=str(tmp_path / "missing.json"), engine=EngineConfig())
        assert code == EXIT_USAGE

    @pytest.mark.anyio
    async def test_hodge_needs_file(self):
        """hodge without a field file is a usage error."""
        assert await run("hodge", engine=EngineConfig()) == EXIT_USAGE

    @pytest.mark.anyio
    async def test_passing_run_writes_report(self, tmp_path):
        """A passing suite exits 0 and writes its report."""
        with patch("wienerflow.runner.verify_flow", AsyncMock(return_value=outcome())) as flow:
            code = await run("verify", target="duality", out=str(tmp_path), engine=EngineConfig())
        assert code == EXIT_PASSED
        assert flow.await_args.args[0] == "duality"
        assert (tmp_path / "report.json").exists()

    @pytest.mark.anyio
    async def test_failing_run(self):
        """A failing check exits 1."""
        with patch("wienerflow.runner.verify_flow", AsyncMock(return_value=outcome(passed=False))):
            code = await run("verify", target="duality", engine=EngineConfig())
        assert code == EXIT_FAILED

    @pytest.mark.anyio
    async def test_seed_override_reaches_config(self):
        """The seed override is applied before dispatch."""
        with patch("wienerflow.runner.demo_flow", AsyncMock(return_value=outcome())) as flow:
            await run("demo", seed=17, engine=EngineConfig())
        config = flow.await_args.args[0]
        assert config.batch.seed == 17
