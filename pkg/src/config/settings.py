"""
Application settings for the Boolean reservoir lab.

Settings are read from the process environment after python-dotenv has
loaded an optional ``.env`` file from the working directory. Experiment
parameters live in ``boolean_reservoir.experiment_config`` instead; this module only
covers how the lab runs (log level, worker count, output location).
"""

import logging
import os
from functools import lru_cache
from typing import Any, Dict, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

load_dotenv()

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

_VALID_ENVIRONMENTS = ("development", "production", "test")
_VALID_ENGINES = ("event", "fixed")


def _env_bool(name: str, default: bool = False) -> bool:
    raw = os.getenv(name)
    if raw is None:
        return default
    return raw.strip().lower() in ("1", "true", "yes", "on")


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    return int(raw)


class SimulationDefaults(BaseModel):
    """Defaults applied when an experiment config leaves them unset."""

    engine: str = Field(default_factory=lambda: os.getenv("BRLAB_ENGINE", "event"))
    max_events: int = Field(default=1_000_000, gt=0, description="Event-queue bound before a run aborts")

    @field_validator("engine")
    @classmethod
    def _known_engine(cls, value: str) -> str:
        if value not in _VALID_ENGINES:
            raise ValueError(f"engine must be one of {_VALID_ENGINES}, got {value!r}")
        return value


class ParallelConfig(BaseModel):
    """Process-pool settings for sweeps and decay repetitions."""

    max_workers: int = Field(default_factory=lambda: _env_int("BRLAB_MAX_WORKERS", 1), ge=1)
    chunk_size: int = Field(default=1, ge=1)


class AppConfig(BaseModel):
    """Main application configuration."""

    app_name: str = "Boolean Reservoir Lab"
    version: str = "1.0.0"
    environment: str = Field(default_factory=lambda: os.getenv("BRLAB_ENVIRONMENT", "development"))
    debug_mode: bool = Field(default_factory=lambda: _env_bool("BRLAB_DEBUG"))
    log_level: str = Field(default_factory=lambda: os.getenv("BRLAB_LOG_LEVEL", "INFO"))
    output_dir: str = Field(default_factory=lambda: os.getenv("BRLAB_OUTPUT_DIR", "results"))

    simulation: SimulationDefaults = Field(default_factory=SimulationDefaults)
    parallel: ParallelConfig = Field(default_factory=ParallelConfig)

    @field_validator("environment")
    @classmethod
    def _known_environment(cls, value: str) -> str:
        if value not in _VALID_ENVIRONMENTS:
            raise ValueError(f"environment must be one of {_VALID_ENVIRONMENTS}, got {value!r}")
        return value

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown log level {value!r}")
        return level

    def is_development(self) -> bool:
        return self.environment == "development"

    def is_production(self) -> bool:
        return self.environment == "production"

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump()


@lru_cache(maxsize=1)
def get_config() -> AppConfig:
    """Return the process-wide configuration instance."""
    return AppConfig()


def get_parallel_config() -> ParallelConfig:
    return get_config().parallel


def get_simulation_defaults() -> SimulationDefaults:
    return get_config().simulation


def configure_logging(level: Optional[str] = None) -> None:
    """Install the root handler used by the CLI and the health check."""
    config = get_config()
    chosen = (level or config.log_level).upper()
    if config.debug_mode and level is None:
        chosen = "DEBUG"
    logging.basicConfig(level=getattr(logging, chosen), format=LOG_FORMAT, force=True)
