"""Runtime settings for the Boolean reservoir lab."""

from .settings import (
    AppConfig,
    ParallelConfig,
    SimulationDefaults,
    configure_logging,
    get_config,
    get_parallel_config,
    get_simulation_defaults,
)

__all__ = [
    "AppConfig",
    "ParallelConfig",
    "SimulationDefaults",
    "configure_logging",
    "get_config",
    "get_parallel_config",
    "get_simulation_defaults",
]
