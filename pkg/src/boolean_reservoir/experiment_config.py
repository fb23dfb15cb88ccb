"""
Declarative experiment configuration.

An experiment is described by one JSON file whose top-level keys mirror
:class:`ExperimentConfig`. Every key is optional; missing keys take the
desk-scale defaults below. Command-line flags override file values through
dotted keys (``"task.trials"``) before validation, so a bad value is
rejected before any work starts.
"""

import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from config import get_config, get_simulation_defaults

from .exceptions import ConfigurationError
from .experiment import PredictionTask
from .models import DecayConfig, Hyperparams, MgParams, SimulationSettings, SweepAxis, SweepGrid

logger = logging.getLogger(__name__)

FULL_DECAY_REPETITIONS = 100
FULL_RESERVOIRS_PER_POINT = 5
FULL_TRIALS_PER_RESERVOIR = 5


def default_hyperparams() -> Hyperparams:
    return Hyperparams(n_nodes=100, spectral_radius=1.5, in_degree=2, mean_delay_ns=11.0,
                       input_density=0.5, input_bits=8, seed=0)


def default_sweeps() -> List[SweepGrid]:
    return [
        SweepGrid(axis=SweepAxis.RHO, values=(0.5, 1.0, 1.5, 2.0)),
        SweepGrid(axis=SweepAxis.K, values=(1, 2, 3, 4)),
        SweepGrid(axis=SweepAxis.TAU_BAR, values=(4.0, 6.5, 9.5, 11.0, 14.0)),
        SweepGrid(axis=SweepAxis.SIGMA, values=(0.25, 0.5, 0.75, 1.0)),
    ]


def default_simulation() -> SimulationSettings:
    defaults = get_simulation_defaults()
    return SimulationSettings(engine=defaults.engine, max_events=defaults.max_events)


class SpectrumSettings(BaseModel):
    model_config = ConfigDict(frozen=True)

    free_run_lyapunov_times: float = Field(100.0, gt=0)
    embed_delay_mg: float = Field(17.0, gt=0)
    bounding_box_inflation: float = Field(0.2, ge=0)


class GenerateSettings(BaseModel):
    model_config = ConfigDict(frozen=True)

    duration_mg: float = Field(10000.0, gt=0)


class ExperimentConfig(BaseModel):
    """Everything one CLI invocation needs."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    hyperparams: Hyperparams = Field(default_factory=default_hyperparams)
    mackey_glass: MgParams = Field(default_factory=MgParams)
    task: PredictionTask = Field(default_factory=PredictionTask)
    simulation: SimulationSettings = Field(default_factory=default_simulation)
    decay: DecayConfig = Field(default_factory=lambda: DecayConfig(tau_bar_values=(4.0, 6.0, 8.0, 11.0, 14.0)))
    sweeps: List[SweepGrid] = Field(default_factory=default_sweeps)
    spectrum: SpectrumSettings = Field(default_factory=SpectrumSettings)
    generate: GenerateSettings = Field(default_factory=GenerateSettings)
    seed: int = Field(0, ge=0, lt=2**64, description="Base seed for inputs and sweeps")
    n_seeds: int = Field(1, ge=1, description="Independent reservoirs in train-predict")
    output_dir: str = Field(default_factory=lambda: get_config().output_dir)
    plots: bool = False
    full_scale: bool = False

    @model_validator(mode="after")
    def _consistent_widths(self) -> "ExperimentConfig":
        if self.hyperparams.input_bits != self.task.n_bits:
            raise ValueError(
                f"hyperparams.input_bits={self.hyperparams.input_bits} differs from task.n_bits={self.task.n_bits}"
            )
        self.decay.check_window(self.task.t_sample_ns)
        return self

    def at_full_scale(self) -> "ExperimentConfig":
        """Copy with the full repetition counts."""
        return self.model_copy(update={
            "decay": self.decay.model_copy(update={"repetitions": FULL_DECAY_REPETITIONS}),
            "sweeps": [
                g.model_copy(update={"reservoirs_per_point": FULL_RESERVOIRS_PER_POINT,
                                     "trials_per_reservoir": FULL_TRIALS_PER_RESERVOIR})
                for g in self.sweeps
            ],
            "task": self.task.model_copy(update={"trials": FULL_TRIALS_PER_RESERVOIR}),
        })


def _set_dotted(data: Dict[str, Any], dotted: str, value: Any) -> None:
    keys = dotted.split(".")
    node = data
    for key in keys[:-1]:
        child = node.setdefault(key, {})
        if not isinstance(child, dict):
            raise ConfigurationError(f"cannot override '{dotted}': '{key}' is not a section")
        node = child
    node[keys[-1]] = value


def load_experiment_config(path: Union[str, Path, None] = None,
                           overrides: Optional[Mapping[str, Any]] = None) -> ExperimentConfig:
    """Read, override and validate an experiment config."""
    data: Dict[str, Any] = {}
    if path is not None:
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except OSError as e:
            raise ConfigurationError(f"cannot read config {path}: {e}") from e
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"config {path} is not valid JSON: {e}") from e
        if not isinstance(data, dict):
            raise ConfigurationError(f"config {path} must contain a JSON object")

    for dotted, value in (overrides or {}).items():
        if value is not None:
            _set_dotted(data, dotted, value)
    if "seed" in data:
        _set_dotted(data, "hyperparams.seed", data["seed"])
    if isinstance(data.get("hyperparams"), dict):
        data["hyperparams"] = {**default_hyperparams().model_dump(), **data["hyperparams"]}

    try:
        cfg = ExperimentConfig(**data)
    except ValidationError as e:
        raise ConfigurationError(f"invalid experiment config: {e}") from e
    if cfg.full_scale:
        cfg = cfg.at_full_scale()
    logger.debug("Loaded experiment config %s", config_hash(cfg))
    return cfg


def canonical_json(cfg: ExperimentConfig) -> str:
    return json.dumps(cfg.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))


def config_hash(cfg: ExperimentConfig) -> str:
    """First 16 hex digits of the SHA-256 of the canonical config."""
    return hashlib.sha256(canonical_json(cfg).encode("utf-8")).hexdigest()[:16]
