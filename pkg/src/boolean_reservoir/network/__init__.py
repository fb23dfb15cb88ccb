"""Random reservoir construction and node truth tables."""

from .examples import EXAMPLE_LUTS, hardware_example_spec
from .generator import (
    build_reservoir,
    check_generated_invariants,
    input_node_count,
    quantize_delay,
    spectral_radius,
)
from .lut import attach_luts, derive_lut, lut_index

__all__ = [
    "EXAMPLE_LUTS",
    "attach_luts",
    "build_reservoir",
    "check_generated_invariants",
    "derive_lut",
    "hardware_example_spec",
    "input_node_count",
    "lut_index",
    "quantize_delay",
    "spectral_radius",
]
