"""Tests for the command-line parser."""
from unittest.mock import AsyncMock, patch

import pytest

from wienerflow.blocks import EngineConfig
from wienerflow.cli import build_parser, main


class TestBuildParser:
    """Tests for build_parser."""

    def test_verify_arguments(self):
        """verify takes a suite and the common options."""
        args = build_parser().parse_args(["verify", "duality", "--seed", "3", "--format", "csv"])
        assert args.command == "verify"
        assert args.suite == "duality"
        assert args.seed == 3
        assert args.format == "csv"

    def test_hodge_file(self):
        """hodge takes a field file."""
        args = build_parser().parse_args(["hodge", "v.json", "--out", "results"])
        assert args.field_file == "v.json"
        assert args.out == "results"

    def test_demo_default_name(self):
        """demo defaults to the counterexample."""
        args = build_parser().parse_args(["demo"])
        assert args.name == "counterexample"
        assert args.format == "json"


class TestMain:
    """Tests for main exit codes."""

    def test_no_command(self):
        """No command prints help and exits 2."""
        assert main([]) == 2

    def test_help(self):
        """--help exits 0."""
        assert main(["--help"]) == 0

    @pytest.mark.parametrize("seed", ["-1", str(1 << 64), "abc"])
    def test_bad_seed(self, seed):
        """Seeds outside the unsigned 64-bit range are usage errors."""
        assert main(["verify", "duality", "--seed", seed]) == 2

    def test_bad_format(self):
        """Unknown output formats are usage errors."""
        assert main(["demo", "--format", "xml"]) == 2

    def test_unknown_suite(self):
        """An unknown suite reaches the runner and exits 2."""
        with patch("wienerflow.runner.get_config", AsyncMock(return_value=EngineConfig())):
            assert main(["verify", "nope"]) == 2
