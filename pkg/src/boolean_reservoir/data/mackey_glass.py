"""
Mackey-Glass trajectories for training and validation.

``du/dt = beta * u(t - delay) / (1 + u(t - delay)**exponent) - gamma * u(t)``
is integrated with the classical four-stage Runge-Kutta scheme. Delayed
values are read from a history stored every half step, so all four stages
find their delayed argument on the grid. The half-step sample between two
steps is filled by cubic Hermite interpolation from the step endpoints and
their derivatives.
"""

import logging
import math
from typing import List

import numpy as np

from ..exceptions import DataGenerationError
from ..models import MgParams, TimeSeries, TimeUnit
from ..models.core import DEFAULT_NS_PER_MG_UNIT

logger = logging.getLogger(__name__)

DEFAULT_TRANSIENT_MG = 500.0
DEFAULT_SAMPLE_DT_MG = 5.0


def _rate(p: MgParams, u: float, delayed: float) -> float:
    return p.beta * delayed / (1.0 + delayed ** p.exponent) - p.gamma * u


def _initial_history(p: MgParams) -> List[float]:
    if isinstance(p.history, tuple):
        return list(p.history)
    return [float(p.history)] * p.history_length


def integrate_mg(p: MgParams, duration: float, transient: float = 0.0,
                 unit_map_ns_per_mg: float = DEFAULT_NS_PER_MG_UNIT) -> TimeSeries:
    """
    Integrate for ``transient + duration`` MG units and return the samples
    on the integration step after the transient, starting at ``t0 = 0``.
    """
    if duration <= 0:
        raise ValueError(f"duration must be positive, got {duration}")
    if transient < 0:
        raise ValueError("transient must be non-negative")
    h = p.step
    n_skip = int(round(transient / h))
    n_keep = int(round(duration / h)) + 1
    lag = p.delay_half_steps

    grid = _initial_history(p)
    u = grid[-1]
    samples = np.empty(n_keep)
    for n in range(n_skip + n_keep - 1):
        if n >= n_skip:
            samples[n - n_skip] = u
        base = len(grid) - 1 - lag
        d0, d_mid, d1 = grid[base], grid[base + 1], grid[base + 2]
        f0 = _rate(p, u, d0)
        k1 = h * f0
        k2 = h * _rate(p, u + 0.5 * k1, d_mid)
        k3 = h * _rate(p, u + 0.5 * k2, d_mid)
        k4 = h * _rate(p, u + k3, d1)
        u_next = u + (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        if not math.isfinite(u_next):
            raise DataGenerationError(f"Mackey-Glass state became non-finite at step {n}")
        f1 = _rate(p, u_next, d1)
        grid.append(0.5 * (u + u_next) + h * (f0 - f1) / 8.0)
        grid.append(u_next)
        u = u_next
    samples[-1] = u
    return TimeSeries(t0=0.0, dt=h, values=samples, units=TimeUnit.MG_UNITS,
                      unit_map_ns_per_mg=unit_map_ns_per_mg)


def normalize_mg(series: TimeSeries) -> TimeSeries:
    """Map every value ``v`` to ``tanh(v - 1)``."""
    return series.model_copy(update={"values": _frozen(np.tanh(series.values - 1.0))})


def resample(series: TimeSeries, dt_out: float) -> TimeSeries:
    """Decimate by the integer stride ``dt_out / dt``; no interpolation."""
    ratio = dt_out / series.dt
    stride = int(round(ratio))
    if stride < 1 or abs(ratio - stride) > 1e-9 * max(1.0, ratio):
        raise ValueError(f"dt_out={dt_out} is not an integer multiple of dt={series.dt}")
    return series.model_copy(
        update={"dt": series.dt * stride, "values": _frozen(series.values[::stride].copy())}
    )


def generate_input_series(p: MgParams, n_samples: int, sample_dt: float = DEFAULT_SAMPLE_DT_MG,
                          transient: float = DEFAULT_TRANSIENT_MG,
                          unit_map_ns_per_mg: float = DEFAULT_NS_PER_MG_UNIT) -> TimeSeries:
    """Normalized series of ``n_samples`` reservoir inputs spaced ``sample_dt`` apart."""
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    raw = integrate_mg(p, (n_samples - 1) * sample_dt, transient=transient,
                       unit_map_ns_per_mg=unit_map_ns_per_mg)
    series = resample(normalize_mg(raw), sample_dt)
    logger.debug("Generated %d Mackey-Glass samples (variance %.4f)", len(series), series.values.var())
    return series


def _frozen(values: np.ndarray) -> np.ndarray:
    values = np.array(values, dtype=float)
    values.setflags(write=False)
    return values
