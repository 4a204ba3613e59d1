"""Transport task - Residual of the transport equation for an antisymmetric A."""

from prefect import task
from prefect.logging import get_run_logger

from wienerflow.artifacts import report_artifact, transport_artifact
from wienerflow.blocks import EngineConfig, get_config
from wienerflow.experiments import Outcome, pde_experiment
from wienerflow.state import RunConfig


@task(persist_result=True, name="transport-residual", log_prints=True)
async def transport_task(
    config: RunConfig,
    engine: EngineConfig | None = None,
) -> Outcome:
    logger = get_run_logger()
    engine = engine or await get_config()

    logger.info(f"[PDE] {config.pde.t_grid} grid times up to t={config.pde.t_max}")
    outcome = pde_experiment(config, engine)
    logger.info(f"[PDE] Max residual {outcome.transport.max_residual:.3e}")

    await transport_artifact(outcome.transport)
    await report_artifact(outcome.report)
    return outcome
