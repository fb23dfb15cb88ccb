"""
Core data models for the Boolean reservoir lab.

This module contains the pydantic models shared by every stage: the
hyperparameters and the immutable network instance they produce, the
fixed-point words that cross the input/output layers, the trained linear
readout, and uniformly sampled time series with explicit units.

Models holding numpy arrays are frozen and their arrays are read-only, so
instances can be shared between threads and sent to worker processes.
Compare them with ``model_dump_json()`` rather than ``==``.
"""

import math
from enum import Enum
from typing import List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .arrays import FloatArray

SPEC_SCHEMA_VERSION = 1
READOUT_SCHEMA_VERSION = 1

DEFAULT_INVERTER_DELAY_NS = 0.19
DEFAULT_NODE_GAMMA_MEAN_NS = 0.274
DEFAULT_NODE_GAMMA_STD_NS = 0.072
DEFAULT_NODE_THRESHOLD = 0.5
DEFAULT_NS_PER_MG_UNIT = 1.25


class TimeUnit(str, Enum):
    """Time axis of a series."""

    MG_UNITS = "mg_units"
    NS = "ns"


class Hyperparams(BaseModel):
    """
    Hyperparameters of a random reservoir.

    ``in_degree``, ``spectral_radius`` and ``input_density`` shape the
    network; ``mean_delay_ns`` sets the link transport delays. The node
    time-constant distribution and the inverter delay are kept here for
    provenance so a spec can be rebuilt from its JSON alone.
    """

    model_config = ConfigDict(frozen=True)

    n_nodes: int = Field(..., gt=0, description="Number of nodes N")
    spectral_radius: float = Field(..., gt=0, description="Target spectral radius rho of W")
    in_degree: int = Field(..., gt=0, description="Recurrent inputs per node k")
    mean_delay_ns: float = Field(..., gt=0, description="Mean link delay tau_bar")
    input_density: float = Field(..., gt=0, le=1, description="Fraction sigma of input nodes")
    input_bits: int = Field(8, ge=1, description="Input word width n")
    seed: int = Field(0, ge=0, lt=2**64, description="Seed of the construction generator")
    inverter_delay_ns: float = Field(DEFAULT_INVERTER_DELAY_NS, gt=0)
    node_gamma_mean_ns: float = Field(DEFAULT_NODE_GAMMA_MEAN_NS, gt=0)
    node_gamma_std_ns: float = Field(DEFAULT_NODE_GAMMA_STD_NS, ge=0)
    node_threshold: float = Field(DEFAULT_NODE_THRESHOLD, gt=0, lt=1)
    literal_input_weights: bool = Field(
        False, description="Use unnormalized two's-complement bit weights"
    )

    @model_validator(mode="after")
    def _degree_fits(self) -> "Hyperparams":
        if self.in_degree > self.n_nodes:
            raise ValueError(
                f"in_degree ({self.in_degree}) must not exceed n_nodes ({self.n_nodes})"
            )
        return self


class ReservoirSpec(BaseModel):
    """
    A complete reservoir instance.

    ``weights[i, j]`` is the weight of the link from node ``j`` into node
    ``i`` and ``link_delays_ns[i, j]`` its transport delay; the two
    matrices share their sparsity pattern. ``luts[i]`` is node ``i``'s
    truth table, position 0 being the all-zeros input.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    schema_version: int = SPEC_SCHEMA_VERSION
    hyperparams: Optional[Hyperparams] = None
    input_bits: int = Field(..., ge=1)
    weights: FloatArray
    input_weights_effective: FloatArray
    link_delays_ns: FloatArray
    node_time_constants_ns: FloatArray
    node_thresholds: FloatArray
    inverter_delay_ns: float = Field(DEFAULT_INVERTER_DELAY_NS, gt=0)
    literal_input_weights: bool = False
    luts: Tuple[str, ...] = ()

    @model_validator(mode="after")
    def _check_consistency(self) -> "ReservoirSpec":
        weights = self.weights
        if weights.ndim != 2 or weights.shape[0] != weights.shape[1] or weights.shape[0] == 0:
            raise ValueError(f"weights must be a non-empty square matrix, got shape {weights.shape}")
        n = weights.shape[0]
        for name in ("input_weights_effective", "node_time_constants_ns", "node_thresholds"):
            vector = getattr(self, name)
            if vector.shape != (n,):
                raise ValueError(f"{name} must have shape ({n},), got {vector.shape}")
        if self.link_delays_ns.shape != (n, n):
            raise ValueError(f"link_delays_ns must have shape ({n}, {n})")
        for name in ("weights", "input_weights_effective", "link_delays_ns",
                     "node_time_constants_ns", "node_thresholds"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise ValueError(f"{name} must be finite")
        if np.any(self.link_delays_ns < 0):
            raise ValueError("link delays must be non-negative")
        if not np.array_equal(self.link_delays_ns != 0, weights != 0):
            raise ValueError("link delays must be non-zero exactly where weights are non-zero")
        if np.any(self.node_time_constants_ns <= 0):
            raise ValueError("node time constants must be positive")
        if np.any((self.node_thresholds <= 0) | (self.node_thresholds >= 1)):
            raise ValueError("node thresholds must lie in (0, 1)")
        if self.luts:
            if len(self.luts) != n:
                raise ValueError(f"expected {n} LUTs, got {len(self.luts)}")
            degrees = np.count_nonzero(weights, axis=1)
            for i, lut in enumerate(self.luts):
                expected = 2 ** (int(degrees[i]) + self.input_bits)
                if len(lut) != expected or set(lut) - {"0", "1"}:
                    raise ValueError(
                        f"LUT of node {i} must be a 0/1 string of length {expected}"
                    )
        return self

    @property
    def n_nodes(self) -> int:
        return int(self.weights.shape[0])

    @property
    def in_degrees(self) -> np.ndarray:
        return np.count_nonzero(self.weights, axis=1)

    @property
    def input_nodes(self) -> Tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.input_weights_effective))

    def sources(self, node: int) -> Tuple[int, ...]:
        """Source nodes feeding ``node`` in ascending index order."""
        return tuple(int(j) for j in np.flatnonzero(self.weights[node]))

    def links(self) -> List[Tuple[int, int]]:
        """All ``(source, destination)`` pairs, ordered by destination then source."""
        return [(src, dst) for dst in range(self.n_nodes) for src in self.sources(dst)]

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ReservoirSpec":
        return cls.model_validate_json(text)


class FixedPointWord(BaseModel):
    """n-bit two's-complement sample; represented value is ``code / 2**(n-1)``."""

    model_config = ConfigDict(frozen=True)

    code: int
    n_bits: int = Field(..., ge=1)

    @model_validator(mode="after")
    def _code_in_range(self) -> "FixedPointWord":
        half = 1 << (self.n_bits - 1)
        if not -half <= self.code < half:
            raise ValueError(f"code {self.code} does not fit in {self.n_bits} bits")
        return self

    @property
    def value(self) -> float:
        return self.code / (1 << (self.n_bits - 1))

    def unsigned(self) -> int:
        return self.code & ((1 << self.n_bits) - 1)

    def bits(self) -> Tuple[int, ...]:
        """Bits of the two's-complement code, least significant first."""
        raw = self.unsigned()
        return tuple((raw >> j) & 1 for j in range(self.n_bits))


class TrainedReadout(BaseModel):
    """Output weights ``[W_state; w_direct]`` and their training record."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    schema_version: int = READOUT_SCHEMA_VERSION
    weights: FloatArray
    ridge_param: float = Field(..., ge=0)
    training_error: float = Field(..., ge=0)
    loo_error: float = Field(..., ge=0)
    loo_curve: Tuple[Tuple[float, float], ...] = ()
    t_sample_ns: Optional[float] = Field(None, gt=0)
    n_bits: Optional[int] = Field(None, ge=1)

    @field_validator("weights")
    @classmethod
    def _finite_vector(cls, value: np.ndarray) -> np.ndarray:
        if value.ndim != 1 or value.size == 0:
            raise ValueError("readout weights must be a non-empty vector")
        if not np.all(np.isfinite(value)):
            raise ValueError("readout weights must be finite")
        return value

    @property
    def n_nodes(self) -> int:
        return int(self.weights.size - 1)

    def predict(self, rows: np.ndarray) -> np.ndarray:
        return np.asarray(rows, dtype=float) @ self.weights

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    @classmethod
    def from_json(cls, text: str) -> "TrainedReadout":
        return cls.model_validate_json(text)


class TimeSeries(BaseModel):
    """Uniformly sampled scalar signal with explicit time units."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    t0: float = 0.0
    dt: float = Field(..., gt=0)
    values: FloatArray
    units: TimeUnit = TimeUnit.MG_UNITS
    unit_map_ns_per_mg: float = Field(DEFAULT_NS_PER_MG_UNIT, gt=0)

    @field_validator("values")
    @classmethod
    def _finite_samples(cls, value: np.ndarray) -> np.ndarray:
        if value.ndim != 1:
            raise ValueError("time series values must be one-dimensional")
        if not np.all(np.isfinite(value)):
            raise ValueError("time series values must be finite")
        return value

    def __len__(self) -> int:
        return int(self.values.size)

    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self))

    def to_ns(self) -> "TimeSeries":
        if self.units == TimeUnit.NS:
            return self
        scale = self.unit_map_ns_per_mg
        return self.model_copy(update={"t0": self.t0 * scale, "dt": self.dt * scale, "units": TimeUnit.NS})

    def to_mg_units(self) -> "TimeSeries":
        if self.units == TimeUnit.MG_UNITS:
            return self
        scale = self.unit_map_ns_per_mg
        return self.model_copy(
            update={"t0": self.t0 / scale, "dt": self.dt / scale, "units": TimeUnit.MG_UNITS}
        )

    def slice(self, start: int, count: Optional[int] = None) -> "TimeSeries":
        if start < 0:
            raise ValueError("slice start must be non-negative")
        stop = len(self) if count is None else start + count
        if stop > len(self):
            raise ValueError(f"slice [{start}, {stop}) exceeds series length {len(self)}")
        return TimeSeries(
            t0=self.t0 + start * self.dt,
            dt=self.dt,
            values=self.values[start:stop],
            units=self.units,
            unit_map_ns_per_mg=self.unit_map_ns_per_mg,
        )


def _is_integral(ratio: float, tol: float = 1e-9) -> bool:
    return abs(ratio - round(ratio)) <= tol * max(1.0, abs(ratio))


class MgParams(BaseModel):
    """
    Mackey-Glass parameters and integration settings.

    ``history`` is either a constant or the stored values on the half-step
    grid covering ``[-delay, 0]`` (``2 * delay / step + 1`` samples).
    """

    model_config = ConfigDict(frozen=True)

    beta: float = Field(0.2, ge=0)
    gamma: float = Field(0.1, gt=0)
    delay: float = Field(17.0, gt=0)
    exponent: float = Field(10.0, gt=0)
    step: float = Field(0.1, gt=0, le=0.5)
    history: Union[float, Tuple[float, ...]] = 1.2

    @model_validator(mode="after")
    def _grid_alignment(self) -> "MgParams":
        if not _is_integral(self.delay / self.step):
            raise ValueError("delay must be an integer multiple of step")
        if not _is_integral(self.delay / (self.step / 2)):
            raise ValueError("delay must be an integer multiple of step / 2")
        if self.delay < self.step:
            raise ValueError("delay must be at least one integration step")
        if isinstance(self.history, tuple):
            expected = self.history_length
            if len(self.history) != expected:
                raise ValueError(f"stored history needs {expected} samples, got {len(self.history)}")
            if not all(math.isfinite(v) for v in self.history):
                raise ValueError("stored history must be finite")
        elif not math.isfinite(self.history):
            raise ValueError("history must be finite")
        return self

    @property
    def delay_half_steps(self) -> int:
        return int(round(self.delay / (self.step / 2)))

    @property
    def history_length(self) -> int:
        return self.delay_half_steps + 1

    def equilibrium(self) -> float:
        """Non-trivial fixed point ``(beta/gamma - 1) ** (1/exponent)``; 0 if none."""
        ratio = self.beta / self.gamma
        if ratio <= 1:
            return 0.0
        return (ratio - 1.0) ** (1.0 / self.exponent)
