"""Prediction metrics, decay-time experiments, spectra and sweeps."""

from .decay import (
    decay_distance,
    decay_trend,
    decay_versus_delay,
    fit_decay,
    measure_decay_time,
)
from .metrics import horizon_samples, nrmse
from .spectra import (
    bounding_box,
    contained_in_box,
    delay_embed,
    peak_offset,
    power_spectrum,
    snap_embed_delay,
)

__all__ = [
    "bounding_box",
    "contained_in_box",
    "decay_distance",
    "decay_trend",
    "decay_versus_delay",
    "delay_embed",
    "fit_decay",
    "horizon_samples",
    "measure_decay_time",
    "nrmse",
    "peak_offset",
    "power_spectrum",
    "snap_embed_delay",
]
