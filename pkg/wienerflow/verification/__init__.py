"""Verification suites: each returns one CheckRecord per verified property."""

from typing import Callable

from wienerflow.blocks import EngineConfig
from wienerflow.state import CheckRecord, ConfigError, RunConfig

from .algebra import (
    duality_suite,
    hodge_suite,
    operator_suite,
    product_rule_suite,
    spectral_suite,
)
from .flows import adapted_suite, flow_basic_suite, flow_density_suite, pde_suite

Suite = Callable[[RunConfig, EngineConfig], list[CheckRecord]]

SUITES: dict[str, Suite] = {
    "duality": duality_suite,
    "product-rule": product_rule_suite,
    "spectral": spectral_suite,
    "operator": operator_suite,
    "hodge": hodge_suite,
    "flow-basic": flow_basic_suite,
    "flow-density": flow_density_suite,
    "pde": pde_suite,
    "adapted": adapted_suite,
}


def run_suite(name: str, config: RunConfig, engine: EngineConfig) -> list[CheckRecord]:
    """Run one named suite on a resolved config."""
    try:
        suite = SUITES[name]
    except KeyError:
        raise ConfigError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}") from None
    return suite(config, engine)


__all__ = [
    "SUITES",
    "Suite",
    "run_suite",
    "adapted_suite",
    "duality_suite",
    "flow_basic_suite",
    "flow_density_suite",
    "hodge_suite",
    "operator_suite",
    "pde_suite",
    "product_rule_suite",
    "spectral_suite",
]
