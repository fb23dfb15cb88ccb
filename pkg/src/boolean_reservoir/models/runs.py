"""
Models describing simulation runs and their recorded output.
"""

import csv
import io
from enum import Enum
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .arrays import BoolArray, FloatArray, IntArray
from .core import FixedPointWord

TRACE_SCHEMA_VERSION = 1
FS_PER_NS = 1_000_000


class EngineKind(str, Enum):
    """Glass-model integration engine."""

    FIXED_STEP = "fixed_step"
    EVENT_DRIVEN = "event_driven"

    @classmethod
    def from_flag(cls, flag: str) -> "EngineKind":
        aliases = {"fixed": cls.FIXED_STEP, "event": cls.EVENT_DRIVEN}
        if flag in aliases:
            return aliases[flag]
        return cls(flag)


class SimConfig(BaseModel):
    """Settings of one simulation run."""

    model_config = ConfigDict(frozen=True)

    step_ns: float = Field(0.005, gt=0, description="Fixed-step engine step h")
    duration_ns: float = Field(..., gt=0)
    record_grid_ns: float = Field(..., gt=0, description="State sampling period, normally t_sample")
    engine: EngineKind = EngineKind.EVENT_DRIVEN
    max_events: int = Field(1_000_000, gt=0, description="Pending-event bound before aborting")
    jitter: bool = False
    jitter_seed: int = Field(0, ge=0)


class InputSchedule(BaseModel):
    """Piecewise-constant input: word ``m`` holds on ``[m*t, (m+1)*t)``."""

    model_config = ConfigDict(frozen=True)

    sample_period_ns: float = Field(..., gt=0)
    words: Tuple[FixedPointWord, ...]

    @field_validator("words")
    @classmethod
    def _uniform_width(cls, words: Tuple[FixedPointWord, ...]) -> Tuple[FixedPointWord, ...]:
        widths = {w.n_bits for w in words}
        if len(widths) > 1:
            raise ValueError(f"all words must share one width, got {sorted(widths)}")
        return words

    @property
    def n_bits(self) -> Optional[int]:
        return self.words[0].n_bits if self.words else None

    def codes(self) -> List[int]:
        return [w.code for w in self.words]

    def values(self) -> np.ndarray:
        return np.array([w.value for w in self.words], dtype=float)

    def truncated(self, count: int) -> "InputSchedule":
        return InputSchedule(sample_period_ns=self.sample_period_ns, words=self.words[:count])


class ClockedRun(BaseModel):
    """Global-clock settings of closed-loop operation."""

    model_config = ConfigDict(frozen=True)

    sample_period_ns: float = Field(..., gt=0, description="t_sample = t_global")
    latency_cycles: int = Field(1, ge=1, description="Readout latency in clock cycles")
    mode_schedule: Optional[Tuple[bool, ...]] = Field(
        None, description="Per cycle: True = stored word drives, False = fed-back prediction"
    )


class StateTrace(BaseModel):
    """Recorded Boolean states, optional continuous states and transitions."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    schema_version: int = TRACE_SCHEMA_VERSION
    engine: EngineKind
    times_ns: FloatArray
    boolean_states: BoolArray
    continuous_states: Optional[FloatArray] = None
    transition_times_fs: IntArray = Field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    transition_nodes: IntArray = Field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    transition_values: BoolArray = Field(default_factory=lambda: np.zeros(0, dtype=bool))

    @model_validator(mode="after")
    def _check_shapes(self) -> "StateTrace":
        times = self.times_ns
        if times.ndim != 1:
            raise ValueError("times_ns must be one-dimensional")
        if times.size > 1 and np.any(np.diff(times) <= 0):
            raise ValueError("record times must be strictly increasing")
        if self.boolean_states.ndim != 2 or self.boolean_states.shape[0] != times.size:
            raise ValueError("boolean_states must have one row per record time")
        if self.continuous_states is not None and self.continuous_states.shape != self.boolean_states.shape:
            raise ValueError("continuous_states must match boolean_states in shape")
        n_transitions = self.transition_times_fs.size
        if self.transition_nodes.size != n_transitions or self.transition_values.size != n_transitions:
            raise ValueError("transition arrays must have equal length")
        return self

    @property
    def n_nodes(self) -> int:
        return int(self.boolean_states.shape[1])

    def transitions_of(self, node: int) -> List[Tuple[int, bool]]:
        """``(time_fs, new_value)`` pairs of one node in time order."""
        mask = self.transition_nodes == node
        return list(zip(self.transition_times_fs[mask].tolist(), self.transition_values[mask].tolist()))

    def to_csv(self, path: Union[str, Path, None] = None, header: Sequence[str] = ()) -> str:
        """Write ``time_ns`` plus one 0/1 column per node; returns the text."""
        buffer = io.StringIO()
        for line in header:
            buffer.write(f"# {line}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["time_ns"] + [f"x_{i}" for i in range(self.n_nodes)])
        for t, row in zip(self.times_ns.tolist(), self.boolean_states.astype(int).tolist()):
            writer.writerow([repr(t)] + row)
        text = buffer.getvalue()
        if path is not None:
            Path(path).write_text(text, encoding="utf-8", newline="\n")
        return text

    def save_npz(self, path: Union[str, Path]) -> None:
        arrays = {
            "schema_version": np.array(self.schema_version),
            "engine": np.array(self.engine.value),
            "times_ns": self.times_ns,
            "boolean_states": self.boolean_states,
            "transition_times_fs": self.transition_times_fs,
            "transition_nodes": self.transition_nodes,
            "transition_values": self.transition_values,
        }
        if self.continuous_states is not None:
            arrays["continuous_states"] = self.continuous_states
        with open(path, "wb") as handle:
            np.savez_compressed(handle, **arrays)

    @classmethod
    def load_npz(cls, path: Union[str, Path]) -> "StateTrace":
        with np.load(path, allow_pickle=False) as data:
            version = int(data["schema_version"])
            if version != TRACE_SCHEMA_VERSION:
                raise ValueError(f"unsupported trace schema version {version}")
            return cls(
                engine=EngineKind(str(data["engine"])),
                times_ns=data["times_ns"],
                boolean_states=data["boolean_states"],
                continuous_states=data["continuous_states"] if "continuous_states" in data.files else None,
                transition_times_fs=data["transition_times_fs"],
                transition_nodes=data["transition_nodes"],
                transition_values=data["transition_values"],
            )


class SimulationSettings(BaseModel):
    """
    Engine choice shared by every run of an experiment.

    ``step_ns`` of ``None`` lets the fixed-step engine pick the largest step
    that divides the sample period and resolves the fastest node.
    """

    model_config = ConfigDict(frozen=True)

    engine: EngineKind = EngineKind.EVENT_DRIVEN
    step_ns: Optional[float] = Field(None, gt=0)
    max_events: int = Field(1_000_000, gt=0)
    jitter: bool = False
    jitter_seed: int = Field(0, ge=0)

    @field_validator("engine", mode="before")
    @classmethod
    def _engine_alias(cls, value):
        if isinstance(value, str):
            return EngineKind.from_flag(value)
        return value

    def run_config(self, duration_ns: float, record_grid_ns: float, step_ns: float) -> SimConfig:
        return SimConfig(
            step_ns=self.step_ns if self.step_ns is not None else step_ns,
            duration_ns=duration_ns,
            record_grid_ns=record_grid_ns,
            engine=self.engine,
            max_events=self.max_events,
            jitter=self.jitter,
            jitter_seed=self.jitter_seed,
        )
