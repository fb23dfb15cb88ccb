"""
Prediction error metrics.
"""

import math

import numpy as np

from ..models import TimeSeries, TimeUnit

_GRID_TOL = 1e-6


def horizon_samples(horizon: float, dt: float) -> int:
    """Number of samples ``ceil(horizon / dt)`` scored over a horizon."""
    if horizon <= 0:
        raise ValueError(f"horizon must be positive, got {horizon}")
    ratio = horizon / dt
    nearest = round(ratio)
    if abs(ratio - nearest) <= _GRID_TOL:
        return int(nearest)
    return math.ceil(ratio)


def nrmse(target: TimeSeries, predicted: TimeSeries, horizon: float, variance: float) -> float:
    """
    Root-mean-square error normalized by the target variance.

    The window starts at the first predicted sample and holds
    ``ceil(horizon / dt)`` samples; ``horizon`` is expressed in the units of
    ``target``. The target must contain every predicted sample time of the
    window on its own grid.
    """
    if variance <= 0:
        raise ValueError(f"variance must be positive, got {variance}")
    if predicted.units != target.units:
        predicted = predicted.to_ns() if target.units == TimeUnit.NS else predicted.to_mg_units()
    if not math.isclose(predicted.dt, target.dt, rel_tol=_GRID_TOL):
        raise ValueError(f"series are sampled differently: dt {predicted.dt} vs {target.dt}")

    count = horizon_samples(horizon, target.dt)
    offset = (predicted.t0 - target.t0) / target.dt
    start = int(round(offset))
    if abs(offset - start) > _GRID_TOL or start < 0:
        raise ValueError("predicted series does not start on the target grid")
    if len(predicted) < count or start + count > len(target):
        raise ValueError(
            f"scoring window of {count} samples is not covered "
            f"(predicted {len(predicted)}, target {len(target) - start} after alignment)"
        )
    error = target.values[start:start + count] - predicted.values[:count]
    return float(np.sqrt(np.sum(error ** 2) / (count * variance)))
