"""Entry point for running wienerflow commands with Prefect."""

import asyncio
import logging
import sys
from pathlib import Path

from wienerflow.blocks import EngineConfig, get_config
from wienerflow.experiments import Outcome
from wienerflow.flows import demo_flow, flow_simulation_flow, hodge_flow, pde_flow, verify_flow
from wienerflow.state import ConfigError, RunConfig, load_run_config
from wienerflow.verification import SUITES

EXIT_PASSED = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def write_outputs(out_dir: str | Path, outcome: Outcome, fmt: str = "json") -> list[Path]:
    """report.json always, extra documents as JSON, and CSV tables for ``fmt == "csv"``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = [out / "report.json"]
    written[0].write_text(outcome.report.to_json())
    for name, document in outcome.documents.items():
        path = out / f"{name}.json"
        path.write_text(document.model_dump_json(indent=2))
        written.append(path)
    if fmt == "csv":
        for name, table in outcome.tables.items():
            path = out / f"{name}.csv"
            table.write(path)
            written.append(path)
    return written


async def _dispatch(command: str, target: str | None, config: RunConfig, engine: EngineConfig) -> Outcome:
    match command:
        case "verify":
            suite = target or config.verify.suite
            if suite is None:
                raise ConfigError("verify needs a suite name")
            if suite not in SUITES:
                raise ConfigError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
            return await verify_flow(suite, config, engine)
        case "hodge":
            if target is None:
                raise ConfigError("hodge needs a field file")
            return await hodge_flow(target, config, engine)
        case "flow":
            return await flow_simulation_flow(config, engine)
        case "pde":
            return await pde_flow(config, engine)
        case "demo":
            return await demo_flow(config, engine)
    raise ConfigError(f"unknown command {command!r}")


async def run(
    command: str,
    target: str | None = None,
    config_path: str | None = None,
    seed: int | None = None,
    out: str | None = None,
    fmt: str = "json",
    engine: EngineConfig | None = None,
) -> int:
    """Run one command and return its exit code.

    Args:
        command: verify, hodge, flow, pde or demo.
        target: Suite name for verify, field file for hodge.
        config_path: Optional run config (JSON). Missing means all defaults.
        seed: Overrides ``batch.seed``.
        out: Output directory; nothing is written when absent.
        fmt: ``json`` or ``csv`` (adds the CSV tables).
        engine: Optional EngineConfig. If not provided, uses defaults.
    """
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    engine = engine or await get_config()

    try:
        config = load_run_config(config_path).resolved(engine, seed)
        outcome = await _dispatch(command, target, config, engine)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    for check in outcome.report.checks:
        print(f"{'pass' if check.passed else 'FAIL'}  {check.name}")

    if out is not None:
        try:
            written = write_outputs(out, outcome, fmt)
        except OSError as e:
            print(f"error: cannot write to {out}: {e.strerror}", file=sys.stderr)
            return EXIT_USAGE
        print(f"\nWrote {', '.join(str(p) for p in written)}")

    return EXIT_PASSED if outcome.passed else EXIT_FAILED


def run_sync(command: str, **kwargs) -> int:
    """Run one command to completion and return its exit code; the CLI entry point."""
    return asyncio.run(run(command, **kwargs))
