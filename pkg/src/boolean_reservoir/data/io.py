"""
CSV persistence of time series.

Files start with ``# key=value`` header lines carrying the time axis, the
units and any provenance entries, followed by a ``time,value`` table.
"""

import csv
import io
import logging
from pathlib import Path
from typing import Dict, Mapping, Optional, Tuple, Union

import numpy as np

from ..exceptions import DataGenerationError
from ..models import TimeSeries, TimeUnit

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

_AXIS_KEYS = ("units", "t0", "dt", "unit_map_ns_per_mg")


def series_to_csv(series: TimeSeries, provenance: Optional[Mapping[str, object]] = None) -> str:
    buffer = io.StringIO()
    header = {
        "units": series.units.value,
        "t0": repr(float(series.t0)),
        "dt": repr(float(series.dt)),
        "unit_map_ns_per_mg": repr(float(series.unit_map_ns_per_mg)),
    }
    for key, value in (provenance or {}).items():
        if key in header:
            raise ValueError(f"provenance key '{key}' collides with a time-axis field")
        header[key] = str(value)
    for key, value in header.items():
        buffer.write(f"# {key}={value}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["time", "value"])
    for t, v in zip(series.times().tolist(), series.values.tolist()):
        writer.writerow([repr(t), repr(v)])
    return buffer.getvalue()


def write_series_csv(series: TimeSeries, path: PathLike,
                     provenance: Optional[Mapping[str, object]] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        path.write_text(series_to_csv(series, provenance), encoding="utf-8", newline="\n")
    except OSError as e:
        raise DataGenerationError(f"could not write series to {path}: {e}") from e
    logger.debug("Wrote %d samples to %s", len(series), path)
    return path


def read_series_csv(path: PathLike) -> Tuple[TimeSeries, Dict[str, str]]:
    """Load a series written by :func:`write_series_csv`; returns it with the remaining header entries."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise DataGenerationError(f"could not read series from {path}: {e}") from e

    header: Dict[str, str] = {}
    body_start = 0
    for body_start, line in enumerate(lines):
        if not line.startswith("#"):
            break
        key, sep, value = line[1:].strip().partition("=")
        if not sep:
            raise DataGenerationError(f"{path}: malformed header line '{line}'")
        header[key.strip()] = value.strip()
    else:
        body_start = len(lines)

    missing = [k for k in _AXIS_KEYS if k not in header]
    if missing:
        raise DataGenerationError(f"{path}: header is missing {', '.join(missing)}")
    rows = list(csv.reader(lines[body_start:]))
    if not rows or rows[0] != ["time", "value"]:
        raise DataGenerationError(f"{path}: expected a 'time,value' table")
    values = np.array([float(row[1]) for row in rows[1:]], dtype=float)
    series = TimeSeries(
        t0=float(header["t0"]),
        dt=float(header["dt"]),
        values=values,
        units=TimeUnit(header["units"]),
        unit_map_ns_per_mg=float(header["unit_map_ns_per_mg"]),
    )
    provenance = {k: v for k, v in header.items() if k not in _AXIS_KEYS}
    return series, provenance
