"""Prefect flows behind the wienerflow subcommands."""

from .verify_flow import verify_flow
from .hodge_flow import hodge_flow
from .simulation_flow import flow_simulation_flow
from .pde_flow import pde_flow
from .demo_flow import demo_flow

__all__ = [
    "verify_flow",
    "hodge_flow",
    "flow_simulation_flow",
    "pde_flow",
    "demo_flow",
]
