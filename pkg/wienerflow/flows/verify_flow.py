"""Verify flow - Run one verification suite."""

from prefect import flow
from prefect.logging import get_run_logger

from wienerflow.blocks import EngineConfig, get_config
from wienerflow.experiments import Outcome
from wienerflow.state import RunConfig
from wienerflow.tasks import verify_task


@flow(
    name="wienerflow-verify",
    description="Run a verification suite and report every check",
    persist_result=True,
    log_prints=True,
)
async def verify_flow(
    suite: str,
    config: RunConfig,
    engine: EngineConfig | None = None,
) -> Outcome:
    logger = get_run_logger()
    engine = engine or await get_config()

    outcome = await verify_task(suite, config, engine)
    failed = sum(not c.passed for c in outcome.report.checks)
    logger.info(f"[VERIFY] {suite}: {len(outcome.report.checks) - failed} passed, {failed} failed")
    return outcome
