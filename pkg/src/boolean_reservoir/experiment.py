"""
Mackey-Glass prediction pipeline shared by the CLI and the sweeps.

One normalized series, sampled every ``sample_dt_mg`` MG units, feeds the
reservoir one word per ``t_sample_ns``. Its layout is

* ``[0, washout + train)``: training drive; design rows start after the
  washout;
* trial ``t`` starts at ``washout + train + t * trial_stride_samples``; the
  trained reservoir is restarted from rest, re-synchronized on
  ``washout + listen_samples`` stored words and then runs autonomously for
  ``ceil(horizon_mg / sample_dt_mg)`` cycles, which are scored against the
  series.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from .analysis.metrics import horizon_samples, nrmse
from .data import generate_input_series
from .exceptions import TrainingError
from .models import (
    ClockedRun,
    InputSchedule,
    MgParams,
    ReservoirSpec,
    SimConfig,
    SimulationSettings,
    StateTrace,
    TimeSeries,
    TimeUnit,
    TrainedReadout,
)
from .readout import DEFAULT_RIDGE_GRID, select_ridge_loo, words_from_values
from .readout.closed_loop import build_design_matrix, run_closed_loop
from .simulation import reference_step_ns, simulate

logger = logging.getLogger(__name__)

SETTLE_DELAYS = 50


class PredictionTask(BaseModel):
    """Closed-loop Mackey-Glass prediction settings."""

    model_config = ConfigDict(frozen=True)

    t_sample_ns: float = Field(6.25, gt=0, description="Input hold period = global clock period")
    sample_dt_mg: float = Field(5.0, gt=0, description="MG time between reservoir inputs")
    n_bits: int = Field(8, ge=1)
    train_samples: int = Field(1500, gt=1)
    horizon_mg: float = Field(116.0, gt=0, description="One Lyapunov time in MG units")
    washout_samples: Optional[int] = Field(None, ge=0, description="None: 50 mean delays")
    listen_samples: int = Field(100, ge=1)
    trials: int = Field(1, ge=1)
    trial_stride_samples: int = Field(200, ge=1)
    ridge_grid: Tuple[float, ...] = DEFAULT_RIDGE_GRID
    latency_cycles: int = Field(1, ge=1)

    @field_validator("ridge_grid")
    @classmethod
    def _valid_grid(cls, grid: Tuple[float, ...]) -> Tuple[float, ...]:
        if not grid:
            raise ValueError("ridge grid must not be empty")
        if any(r < 0 or not math.isfinite(r) for r in grid):
            raise ValueError("ridge parameters must be finite and non-negative")
        return grid

    @property
    def unit_map_ns_per_mg(self) -> float:
        return self.t_sample_ns / self.sample_dt_mg

    @property
    def horizon_cycles(self) -> int:
        return horizon_samples(self.horizon_mg, self.sample_dt_mg)

    def washout(self, mean_delay_ns: float) -> int:
        if self.washout_samples is not None:
            return self.washout_samples
        return math.ceil(SETTLE_DELAYS * mean_delay_ns / self.t_sample_ns)

    def trial_start(self, mean_delay_ns: float, trial: int) -> int:
        return self.washout(mean_delay_ns) + self.train_samples + trial * self.trial_stride_samples

    def required_samples(self, mean_delay_ns: float, extra_cycles: int = 0) -> int:
        """Series length covering training and every trial."""
        last = self.trial_start(mean_delay_ns, self.trials - 1)
        cycles = max(self.horizon_cycles, extra_cycles)
        return last + self.washout(mean_delay_ns) + self.listen_samples + cycles


@dataclass(frozen=True)
class TrialResult:
    trial: int
    nrmse: float
    prediction: TimeSeries
    truth: TimeSeries


@dataclass(frozen=True)
class PredictionReport:
    spec: ReservoirSpec
    readout: TrainedReadout
    trials: List[TrialResult]
    variance: float

    @property
    def nrmse_values(self) -> List[float]:
        return [t.nrmse for t in self.trials]

    @property
    def median_nrmse(self) -> float:
        return float(np.median(self.nrmse_values))


def run_config(spec: ReservoirSpec, settings: SimulationSettings, n_cycles: int,
               t_sample_ns: float) -> SimConfig:
    """Engine config recording once per clock cycle over ``n_cycles`` edges."""
    return settings.run_config(
        duration_ns=max(n_cycles - 1, 1) * t_sample_ns,
        record_grid_ns=t_sample_ns,
        step_ns=reference_step_ns(spec, t_sample_ns),
    )


def prediction_dataset(mg: MgParams, task: PredictionTask, n_samples: int) -> TimeSeries:
    return generate_input_series(mg, n_samples, sample_dt=task.sample_dt_mg,
                                 unit_map_ns_per_mg=task.unit_map_ns_per_mg)


def _check_widths(spec: ReservoirSpec, task: PredictionTask) -> None:
    if spec.input_bits != task.n_bits:
        raise TrainingError(f"spec expects {spec.input_bits}-bit words but the task uses {task.n_bits}")


def _mean_delay(spec: ReservoirSpec) -> float:
    if spec.hyperparams is not None:
        return spec.hyperparams.mean_delay_ns
    delays = spec.link_delays_ns[spec.link_delays_ns > 0]
    return float(delays.mean()) if delays.size else 0.0


def drive(spec: ReservoirSpec, values: np.ndarray, task: PredictionTask,
          settings: SimulationSettings) -> Tuple[StateTrace, InputSchedule]:
    """Drive with the quantized ``values`` and latch the state at every clock edge."""
    schedule = InputSchedule(sample_period_ns=task.t_sample_ns,
                             words=words_from_values(values, task.n_bits))
    trace = simulate(spec, schedule, run_config(spec, settings, len(values), task.t_sample_ns))
    return trace, schedule


def train_reservoir(spec: ReservoirSpec, series: TimeSeries, task: PredictionTask,
                    settings: Optional[SimulationSettings] = None) -> Tuple[TrainedReadout, np.ndarray, np.ndarray]:
    """
    Train the readout on the training window of ``series``.

    Returns the readout with the design matrix and targets it was fitted on.
    """
    _check_widths(spec, task)
    settings = settings or SimulationSettings()
    washout = task.washout(_mean_delay(spec))
    count = washout + task.train_samples
    if len(series) < count:
        raise TrainingError(f"series has {len(series)} samples, training needs {count}")
    values = series.values[:count]
    trace, schedule = drive(spec, values, task, settings)
    rows, targets = build_design_matrix(
        trace.boolean_states[:count], schedule.values(), values, washout, task.latency_cycles
    )
    readout = select_ridge_loo(rows, targets, task.ridge_grid,
                               t_sample_ns=task.t_sample_ns, n_bits=task.n_bits)
    logger.info("Trained readout on %d rows: r=%g, training MSE %.3e, LOO MSE %.3e",
                rows.shape[0], readout.ridge_param, readout.training_error, readout.loo_error)
    return readout, rows, targets


def free_run(spec: ReservoirSpec, readout: TrainedReadout, series: TimeSeries, start: int,
             task: PredictionTask, n_cycles: int,
             settings: Optional[SimulationSettings] = None) -> Tuple[TimeSeries, TimeSeries]:
    """
    Re-synchronize from ``start`` and run ``n_cycles`` autonomously.

    Returns the prediction and the matching stretch of ``series`` in MG
    units, both timed from the beginning of the warmup.
    """
    _check_widths(spec, task)
    settings = settings or SimulationSettings()
    n_warm = task.washout(_mean_delay(spec)) + task.listen_samples
    stop = start + n_warm + n_cycles
    if stop > len(series):
        raise TrainingError(f"series ends at {len(series)} samples, the run needs {stop}")
    warm = InputSchedule(sample_period_ns=task.t_sample_ns,
                         words=words_from_values(series.values[start:start + n_warm], task.n_bits))
    clk = ClockedRun(sample_period_ns=task.t_sample_ns, latency_cycles=task.latency_cycles)
    engine_cfg = run_config(spec, settings, n_warm + n_cycles, task.t_sample_ns)
    prediction = run_closed_loop(spec, readout, warm, n_cycles, clk, engine_cfg,
                                 unit_map_ns_per_mg=task.unit_map_ns_per_mg).to_mg_units()
    truth = TimeSeries(t0=0.0, dt=series.dt, values=series.values[start:stop],
                       units=TimeUnit.MG_UNITS, unit_map_ns_per_mg=task.unit_map_ns_per_mg)
    return prediction, truth


def evaluate_trial(spec: ReservoirSpec, readout: TrainedReadout, series: TimeSeries,
                   task: PredictionTask, trial: int, variance: float,
                   settings: Optional[SimulationSettings] = None) -> TrialResult:
    start = task.trial_start(_mean_delay(spec), trial)
    prediction, truth = free_run(spec, readout, series, start, task, task.horizon_cycles, settings)
    score = nrmse(truth, prediction, task.horizon_mg, variance)
    logger.info("Trial %d: NRMSE over %g MG units = %.4f", trial, task.horizon_mg, score)
    return TrialResult(trial=trial, nrmse=score, prediction=prediction, truth=truth)


def run_prediction(spec: ReservoirSpec, series: TimeSeries, task: PredictionTask,
                   settings: Optional[SimulationSettings] = None,
                   readout: Optional[TrainedReadout] = None) -> PredictionReport:
    """Train (unless a readout is given) and score every trial."""
    needed = task.required_samples(_mean_delay(spec))
    if len(series) < needed:
        raise TrainingError(f"series has {len(series)} samples, the task needs {needed}")
    variance = float(series.values.var())
    if variance <= 0:
        raise TrainingError("input series has zero variance")
    if readout is None:
        readout, _, _ = train_reservoir(spec, series, task, settings)
    trials = [evaluate_trial(spec, readout, series, task, t, variance, settings)
              for t in range(task.trials)]
    return PredictionReport(spec=spec, readout=readout, trials=trials, variance=variance)

