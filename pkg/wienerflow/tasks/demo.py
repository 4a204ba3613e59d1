"""Demo task - Hermite series counterexample table."""

from prefect import task
from prefect.logging import get_run_logger

from wienerflow.artifacts import demo_artifact
from wienerflow.blocks import EngineConfig, get_config
from wienerflow.experiments import Outcome, demo_experiment
from wienerflow.state import RunConfig


@task(persist_result=True, name="counterexample-demo", log_prints=True)
async def demo_task(
    config: RunConfig,
    engine: EngineConfig | None = None,
) -> Outcome:
    logger = get_run_logger()
    engine = engine or await get_config()

    logger.info(f"[DEMO] m_max={config.demo.m_max}, weights {config.demo.weights}")
    outcome = demo_experiment(config, engine)
    results = outcome.report.results
    logger.info(
        f"[DEMO] H column {results['h_norm_sq']:.6g}, weighted column {results['weighted_norm_sq']:.6g}"
    )

    await demo_artifact(outcome.demo)
    return outcome
