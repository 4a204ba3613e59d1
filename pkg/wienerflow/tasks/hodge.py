"""Hodge task - Decompose a stored chaos field."""

from prefect import task
from prefect.logging import get_run_logger

from wienerflow.artifacts import report_artifact
from wienerflow.blocks import EngineConfig, get_config
from wienerflow.experiments import Outcome, hodge_experiment
from wienerflow.state import RunConfig


@task(persist_result=True, name="hodge-decompose", log_prints=True)
async def hodge_task(
    field_file: str,
    config: RunConfig,
    engine: EngineConfig | None = None,
) -> Outcome:
    logger = get_run_logger()
    engine = engine or await get_config()

    logger.info(f"[HODGE] Decomposing {field_file}")
    outcome = hodge_experiment(field_file, config, engine)
    results = outcome.report.results
    logger.info(f"[HODGE] |v0| = {results['v0_norm']:.6g}, |ve| = {results['ve_norm']:.6g}")

    await report_artifact(outcome.report)
    return outcome
