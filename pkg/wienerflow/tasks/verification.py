"""Verify task - Run one named verification suite."""

from prefect import task
from prefect.logging import get_run_logger

from wienerflow.artifacts import verify_artifacts
from wienerflow.blocks import EngineConfig, get_config
from wienerflow.experiments import Outcome, verify_experiment
from wienerflow.state import RunConfig


@task(persist_result=True, name="verify-suite", log_prints=True)
async def verify_task(
    suite: str,
    config: RunConfig,
    engine: EngineConfig | None = None,
) -> Outcome:
    """Run ``suite`` and publish its check table."""
    logger = get_run_logger()
    engine = engine or await get_config()

    logger.info(f"[VERIFY] Running suite {suite} (seed {config.batch.seed})")
    outcome = verify_experiment(suite, config, engine)

    for check in outcome.report.checks:
        status = "pass" if check.passed else "FAIL"
        logger.info(f"[VERIFY]   {status}: {check.name} ({check.value} vs {check.bound})")

    await verify_artifacts(suite, outcome.report)
    return outcome
