"""Prefect Block holding the engine defaults."""

from prefect.blocks.core import Block
from pydantic import Field

from wienerflow.dynamics import SolverMethod, SolverOptions


class EngineConfig(Block):
    """Configuration block for wienerflow runs.

    Run configs only override what they set; everything else comes from here.
    """

    _block_type_name = "wienerflow-config"
    _block_type_slug = "wienerflow-config"

    solver: SolverMethod = Field(
        default=SolverMethod.RK45,
        description="ODE solver: adaptive rk45 or fixed-step rk4",
    )
    atol: float = Field(default=1e-9, gt=0, description="Absolute solver tolerance")
    rtol: float = Field(default=1e-9, gt=0, description="Relative solver tolerance")
    rk4_steps: int = Field(default=400, ge=1, description="Fixed RK4 steps over [s, t]")
    chunk_size: int = Field(
        default=256, ge=1, description="Samples solved together by the adaptive solver"
    )
    workers: int = Field(default=1, ge=1, description="Worker threads for sampling")
    mc_samples: int = Field(default=100_000, ge=2, description="Default Monte-Carlo sample count")
    seed: int = Field(default=0, ge=0, description="Default RNG seed")
    exact_atol: float = Field(
        default=1e-12, gt=0, description="Tolerance for exact chaos-coefficient identities"
    )
    se_multiplier: float = Field(
        default=4.0, gt=0, description="Standard errors allowed in Monte-Carlo checks"
    )

    def solver_options(self) -> SolverOptions:
        return SolverOptions(
            method=self.solver,
            atol=self.atol,
            rtol=self.rtol,
            steps=self.rk4_steps,
            chunk_size=self.chunk_size,
        )


async def get_config() -> EngineConfig:
    """Tolerances and batch sizes from the saved `default` block, else the built-in values."""
    try:
        return await EngineConfig.load("default")
    except ValueError:
        # no saved block
        return EngineConfig()
