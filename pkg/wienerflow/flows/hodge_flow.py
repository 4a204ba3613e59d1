"""Hodge flow - Decompose a field file into its divergence-free and exact parts."""

from prefect import flow
from prefect.logging import get_run_logger

from wienerflow.blocks import EngineConfig, get_config
from wienerflow.experiments import Outcome
from wienerflow.state import RunConfig
from wienerflow.tasks import hodge_task


@flow(
    name="wienerflow-hodge",
    description="Decompose v = v0 + grad psi and represent v0 = dd A",
    persist_result=True,
    log_prints=True,
)
async def hodge_flow(
    field_file: str,
    config: RunConfig,
    engine: EngineConfig | None = None,
) -> Outcome:
    logger = get_run_logger()
    engine = engine or await get_config()

    outcome = await hodge_task(field_file, config, engine)
    logger.info(f"[HODGE] Decomposition {'verified' if outcome.passed else 'FAILED'}")
    return outcome
