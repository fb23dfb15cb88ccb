"""Mackey-Glass data generation and time-series files."""

from .io import read_series_csv, series_to_csv, write_series_csv
from .mackey_glass import (
    DEFAULT_SAMPLE_DT_MG,
    DEFAULT_TRANSIENT_MG,
    generate_input_series,
    integrate_mg,
    normalize_mg,
    resample,
)

__all__ = [
    "DEFAULT_SAMPLE_DT_MG",
    "DEFAULT_TRANSIENT_MG",
    "generate_input_series",
    "integrate_mg",
    "normalize_mg",
    "read_series_csv",
    "resample",
    "series_to_csv",
    "write_series_csv",
]
