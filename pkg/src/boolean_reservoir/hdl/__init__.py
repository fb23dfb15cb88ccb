"""Verilog emission of reservoir specs."""

from .emitter import (
    FILE_NAMES,
    MANIFEST_NAME,
    HdlBundle,
    delay_to_pairs,
    emit,
    lut_to_literal,
    pack_output_weights,
    write_bundle,
)

__all__ = [
    "FILE_NAMES",
    "MANIFEST_NAME",
    "HdlBundle",
    "delay_to_pairs",
    "emit",
    "lut_to_literal",
    "pack_output_weights",
    "write_bundle",
]
