"""
Models for analysis settings and results.
"""

from enum import Enum
from typing import List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .arrays import FloatArray


class DecayConfig(BaseModel):
    """Settings of the fading-memory decay experiment."""

    model_config = ConfigDict(frozen=True)

    n_samples_each_side: int = Field(200, gt=0, description="Input slots before and after t = 0")
    repetitions: int = Field(20, ge=3)
    fit_window_ns: Optional[float] = Field(None, gt=0, description="Upper bound on the fitted span")
    tau_bar_values: Tuple[float, ...] = Field((), description="Mean delays for the trend fit")

    def check_window(self, t_sample_ns: float) -> None:
        if self.fit_window_ns is not None and self.fit_window_ns >= self.n_samples_each_side * t_sample_ns:
            raise ValueError("fit window must be shorter than n_samples_each_side * t_sample")


class DecayResult(BaseModel):
    """Mean decay time over the repetitions that could be fitted."""

    model_config = ConfigDict(frozen=True)

    lambda_ns: float
    stderr: float = Field(..., ge=0)
    n_used: int = Field(..., ge=1)
    n_discarded: int = Field(..., ge=0)
    lambdas: Tuple[float, ...]


class DecayTrend(BaseModel):
    """Linear fit of decay time against mean link delay."""

    model_config = ConfigDict(frozen=True)

    slope: float
    intercept: float
    r_squared: float
    slope_stderr: float


class SweepAxis(str, Enum):
    """Hyperparameter varied by a sweep."""

    RHO = "rho"
    K = "k"
    TAU_BAR = "tau_bar"
    SIGMA = "sigma"

    @property
    def field_name(self) -> str:
        return {
            SweepAxis.RHO: "spectral_radius",
            SweepAxis.K: "in_degree",
            SweepAxis.TAU_BAR: "mean_delay_ns",
            SweepAxis.SIGMA: "input_density",
        }[self]


class SweepGrid(BaseModel):
    """One-dimensional hyperparameter sweep."""

    model_config = ConfigDict(frozen=True)

    axis: SweepAxis
    values: Tuple[Union[int, float], ...]
    reservoirs_per_point: int = Field(3, gt=0)
    trials_per_reservoir: int = Field(3, gt=0)

    @field_validator("values")
    @classmethod
    def _non_empty(cls, values: Tuple[Union[int, float], ...]) -> Tuple[Union[int, float], ...]:
        if not values:
            raise ValueError("sweep values must not be empty")
        return values

    @model_validator(mode="after")
    def _integer_degrees(self) -> "SweepGrid":
        if self.axis == SweepAxis.K and any(float(v) != int(v) for v in self.values):
            raise ValueError("in-degree sweep values must be integers")
        return self


class SweepRow(BaseModel):
    """Aggregated result of one sweep point."""

    model_config = ConfigDict(frozen=True)

    axis: SweepAxis
    value: float
    nrmse_mean: float
    nrmse_stderr: float
    nrmse_median: float
    lambda_mean: float
    lambda_stderr: float
    n_runs: int
    n_failed: int
    errors: Tuple[str, ...] = ()

    @property
    def flagged(self) -> bool:
        return self.n_failed > 0

    @staticmethod
    def csv_columns() -> List[str]:
        return [
            "axis", "value", "nrmse_mean", "nrmse_stderr", "nrmse_median",
            "lambda_mean", "lambda_stderr", "n_runs", "n_failed",
        ]

    def csv_row(self) -> List[str]:
        return [
            self.axis.value, repr(self.value), repr(self.nrmse_mean), repr(self.nrmse_stderr),
            repr(self.nrmse_median), repr(self.lambda_mean), repr(self.lambda_stderr),
            str(self.n_runs), str(self.n_failed),
        ]


class SpectrumResult(BaseModel):
    """Peak-normalized power spectrum over non-negative frequencies."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    freqs: FloatArray
    power: FloatArray
    peak_freq: float
    units: str = Field("1/mg_units", description="Unit of the frequency axis")

    @model_validator(mode="after")
    def _normalized(self) -> "SpectrumResult":
        if self.freqs.shape != self.power.shape or self.freqs.ndim != 1:
            raise ValueError("freqs and power must be vectors of equal length")
        if np.any(self.power < 0) or not np.isclose(self.power.max(), 1.0):
            raise ValueError("power must be non-negative with unit maximum")
        return self

    @property
    def bin_width(self) -> float:
        return float(self.freqs[1] - self.freqs[0]) if self.freqs.size > 1 else float("nan")
