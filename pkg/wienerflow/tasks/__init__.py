"""Prefect tasks for wienerflow runs."""

from .verification import verify_task
from .hodge import hodge_task
from .simulation import simulation_task
from .transport import transport_task
from .demo import demo_task

__all__ = [
    "verify_task",
    "hodge_task",
    "simulation_task",
    "transport_task",
    "demo_task",
]
