"""
Power spectra and delay-embedding reconstruction of scalar series.
"""

import logging
from typing import Tuple

import numpy as np
from scipy import signal

from ..models import SpectrumResult, TimeSeries

logger = logging.getLogger(__name__)

MIN_SPECTRUM_SAMPLES = 256
DEFAULT_BOX_INFLATION = 0.2
_GRID_TOL = 1e-9


def power_spectrum(series: TimeSeries) -> SpectrumResult:
    """
    Welch-averaged power spectral density normalized to a unit peak.

    Frequencies are non-negative and expressed in cycles per unit of the
    series' own time axis. Segments are ``max(256, n // 8)`` samples long.
    """
    n = len(series)
    if n < MIN_SPECTRUM_SAMPLES:
        raise ValueError(f"power spectrum needs at least {MIN_SPECTRUM_SAMPLES} samples, got {n}")
    values = series.values
    if np.ptp(values) == 0:
        raise ValueError("constant series has no defined spectral peak")
    nperseg = min(n, max(MIN_SPECTRUM_SAMPLES, n // 8))
    freqs, power = signal.welch(values, fs=1.0 / series.dt, nperseg=nperseg, detrend="constant")
    peak = float(power.max())
    if peak <= 0:
        raise ValueError("spectrum vanishes after mean removal")
    index = int(np.argmax(power))
    return SpectrumResult(
        freqs=freqs,
        power=power / peak,
        peak_freq=float(freqs[index]),
        units=f"1/{series.units.value}",
    )


def peak_offset(free_run: SpectrumResult, truth: SpectrumResult) -> Tuple[float, float]:
    """Absolute and relative distance between the two spectral peaks."""
    if free_run.units != truth.units:
        raise ValueError(f"spectra use different units: {free_run.units} vs {truth.units}")
    if truth.peak_freq == 0:
        raise ValueError("reference spectrum peaks at zero frequency")
    offset = abs(free_run.peak_freq - truth.peak_freq)
    return offset, offset / truth.peak_freq


def embedding_lag(series: TimeSeries, embed_delay: float) -> int:
    """Whole number of samples in ``embed_delay``; rejects delays off the sample grid."""
    if embed_delay < 0:
        raise ValueError("embedding delay must be non-negative")
    ratio = embed_delay / series.dt
    lag = int(round(ratio))
    if abs(ratio - lag) > _GRID_TOL * max(1.0, ratio):
        raise ValueError(f"embedding delay {embed_delay} is not a multiple of dt={series.dt}")
    return lag


def snap_embed_delay(embed_delay: float, dt: float) -> float:
    """Nearest multiple of ``dt`` to ``embed_delay`` (at least one sample)."""
    return max(1, int(round(embed_delay / dt))) * dt


def delay_embed(series: TimeSeries, embed_delay: float) -> np.ndarray:
    """Rows ``(u(t), u(t - embed_delay))`` for every ``t`` with a delayed partner."""
    lag = embedding_lag(series, embed_delay)
    values = series.values
    if lag >= values.size:
        return np.empty((0, 2))
    return np.column_stack([values[lag:], values[:values.size - lag]])


def bounding_box(points: np.ndarray, inflation: float = DEFAULT_BOX_INFLATION) -> Tuple[np.ndarray, np.ndarray]:
    """Axis-aligned box of ``points`` grown by ``inflation`` of its extent on each side."""
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[0] == 0:
        raise ValueError("bounding box needs a non-empty point matrix")
    low, high = points.min(axis=0), points.max(axis=0)
    margin = inflation * (high - low)
    return low - margin, high + margin


def contained_in_box(points: np.ndarray, box: Tuple[np.ndarray, np.ndarray]) -> bool:
    points = np.asarray(points, dtype=float)
    low, high = box
    return bool(np.all((points >= low) & (points <= high)))


def embedding_csv(points: np.ndarray, header=()) -> str:
    lines = [f"# {line}" for line in header]
    lines.append("u_t,u_t_minus_delay")
    lines.extend(f"{a!r},{b!r}" for a, b in points.tolist())
    return "\n".join(lines) + "\n"


def spectrum_csv(result: SpectrumResult, header=()) -> str:
    lines = [f"# {line}" for line in header]
    lines.append(f"# peak_freq={result.peak_freq!r}")
    lines.append(f"freq_{result.units.replace('/', 'per_')},power")
    lines.extend(f"{f!r},{p!r}" for f, p in zip(result.freqs.tolist(), result.power.tolist()))
    return "\n".join(lines) + "\n"
