"""Flow simulation flow - Integrate a vector field and track its density."""

from prefect import flow
from prefect.logging import get_run_logger

from wienerflow.blocks import EngineConfig, get_config
from wienerflow.experiments import Outcome
from wienerflow.state import RunConfig
from wienerflow.tasks import simulation_task


@flow(
    name="wienerflow-flow",
    description="Simulate T_{s,t} and check densities and flow laws",
    persist_result=True,
    log_prints=True,
)
async def flow_simulation_flow(
    config: RunConfig,
    engine: EngineConfig | None = None,
) -> Outcome:
    logger = get_run_logger()
    engine = engine or await get_config()

    outcome = await simulation_task(config, engine)
    logger.info(f"[FLOW] {len(outcome.report.checks)} checks, passed={outcome.passed}")
    return outcome
