"""Input encoding, readout training and closed-loop operation."""

from .fixed_point import (
    dequantize,
    dequantize_codes,
    expand_input_weights,
    quantize,
    quantize_array,
    to_output_word,
    words_from_values,
)
from .ridge import DEFAULT_RIDGE_GRID, loo_errors, objective, ridge_train, select_ridge_loo

__all__ = [
    "DEFAULT_RIDGE_GRID",
    "dequantize",
    "dequantize_codes",
    "expand_input_weights",
    "loo_errors",
    "objective",
    "quantize",
    "quantize_array",
    "ridge_train",
    "select_ridge_loo",
    "to_output_word",
    "words_from_values",
]
