"""Demo flow - Hermite series counterexample."""

from prefect import flow
from prefect.logging import get_run_logger

from wienerflow.blocks import EngineConfig, get_config
from wienerflow.experiments import Outcome
from wienerflow.state import RunConfig
from wienerflow.tasks import demo_task


@flow(
    name="wienerflow-demo",
    description="Divergent H-norm against convergent weighted norm of a Hermite series",
    persist_result=True,
    log_prints=True,
)
async def demo_flow(
    config: RunConfig,
    engine: EngineConfig | None = None,
) -> Outcome:
    logger = get_run_logger()
    engine = engine or await get_config()

    outcome = await demo_task(config, engine)
    logger.info(f"[DEMO] {len(outcome.demo)} rows")
    return outcome
