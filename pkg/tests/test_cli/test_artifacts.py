"""Tests for Prefect artifact helpers."""
from unittest.mock import AsyncMock, patch

import pytest

from wienerflow.artifacts import check_rows, sanitize_key, verify_artifacts
from wienerflow.state import CheckRecord, RunConfig, RunReport


class TestSanitizeKey:
    """Tests for sanitize_key."""

    def test_lowercase_dashes(self):
        """Dots, underscores and spaces become dashes."""
        assert sanitize_key("Flow_Density.v2 run") == "flow-density-v2-run"

    @pytest.mark.parametrize(
        "name,key",
        [("spectral: T_t = Mehler", "spectral-t-t-mehler"), ("  hodge/(v0)  ", "hodge-v0"), ("lp--check", "lp-check")],
    )
    def test_collapses_other_characters(self, name, key):
        """Runs of symbols collapse to one dash with no dash at either end."""
        assert sanitize_key(name) == key


class TestCheckRows:
    """Tests for check_rows."""

    def test_formats_values(self):
        """Missing values show as n/a and failures as NO."""
        rows = check_rows(
            [
                CheckRecord(name="a", mode="exact", value=1.5e-13, bound=1e-12, passed=True),
                CheckRecord(name="b", mode="mc", passed=False),
            ]
        )
        assert rows[0] == {"Check": "a", "Mode": "exact", "Value": "1.5e-13", "Bound": "1e-12", "Pass": "yes"}
        assert rows[1]["Value"] == "n/a"
        assert rows[1]["Pass"] == "NO"


class TestVerifyArtifacts:
    """Tests for verify_artifacts."""

    @pytest.mark.anyio
    async def test_creates_table_and_summary(self):
        """One table and one markdown artifact per suite."""
        report = RunReport(
            command="verify product-rule",
            config=RunConfig(),
            checks=[CheckRecord(name="weak product rule", mode="exact", passed=False, detail="off")],
        )
        with (
            patch("wienerflow.artifacts.create_table_artifact", AsyncMock()) as table,
            patch("wienerflow.artifacts.create_markdown_artifact", AsyncMock()) as markdown,
        ):
            await verify_artifacts("product-rule", report)
        assert table.await_args.kwargs["key"] == "verify-product-rule"
        md = markdown.await_args.kwargs["markdown"]
        assert "FAILED" in md
        assert "weak product rule: off" in md
