"""Flow simulation task - Integrate a field and run the configured checks."""

from prefect import task
from prefect.logging import get_run_logger

from wienerflow.artifacts import galerkin_artifact, report_artifact
from wienerflow.blocks import EngineConfig, get_config
from wienerflow.experiments import Outcome, flow_experiment
from wienerflow.state import RunConfig


@task(persist_result=True, name="flow-simulation", log_prints=True)
async def simulation_task(
    config: RunConfig,
    engine: EngineConfig | None = None,
) -> Outcome:
    """Simulate T_{s,t} for the configured field.

    Per-sample solver failures are reported in the results, not raised.
    """
    logger = get_run_logger()
    engine = engine or await get_config()

    logger.info(f"[FLOW] {config.field.kind} field {config.field.name!r} on [{config.s}, {config.t}]")
    logger.info(f"[FLOW] Checks: {', '.join(config.checks) or 'none'}")
    outcome = flow_experiment(config, engine)

    failures = outcome.report.results.get("failures", 0)
    if failures:
        logger.warning(f"[FLOW] {failures} samples failed to integrate")

    await report_artifact(outcome.report)
    if outcome.galerkin is not None:
        await galerkin_artifact(outcome.galerkin)
    return outcome
