"""PDE flow - Transport equation residuals for f0 o T_t."""

from prefect import flow
from prefect.logging import get_run_logger

from wienerflow.blocks import EngineConfig, get_config
from wienerflow.experiments import Outcome
from wienerflow.state import RunConfig
from wienerflow.tasks import transport_task


@flow(
    name="wienerflow-pde",
    description="Check df/dt = delta(A grad f) along the flow of dd(A^T)",
    persist_result=True,
    log_prints=True,
)
async def pde_flow(
    config: RunConfig,
    engine: EngineConfig | None = None,
) -> Outcome:
    logger = get_run_logger()
    engine = engine or await get_config()

    outcome = await transport_task(config, engine)
    logger.info(f"[PDE] passed={outcome.passed}")
    return outcome
