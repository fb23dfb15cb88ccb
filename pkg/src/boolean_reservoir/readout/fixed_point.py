"""
Two's-complement fixed-point encoding of the reservoir input and output.

An n-bit code ``c`` represents ``c / 2**(n-1)`` in ``[-1, 1)``. Rounding to
the nearest code breaks ties toward negative infinity
(``ceil(x * 2**(n-1) - 0.5)``) and out-of-range values saturate.
"""

import math
from typing import Iterable

import numpy as np

from ..models import FixedPointWord


def code_range(n_bits: int) -> range:
    half = 1 << (n_bits - 1)
    return range(-half, half)


def _check_width(n_bits: int) -> None:
    if n_bits < 1:
        raise ValueError(f"n_bits must be at least 1, got {n_bits}")


def quantize(value: float, n_bits: int) -> FixedPointWord:
    """Nearest n-bit word to ``value``; ties go toward negative infinity."""
    _check_width(n_bits)
    if not math.isfinite(value):
        raise ValueError(f"cannot quantize non-finite value {value!r}")
    scale = 1 << (n_bits - 1)
    code = math.ceil(value * scale - 0.5)
    code = min(max(code, -scale), scale - 1)
    return FixedPointWord(code=code, n_bits=n_bits)


def dequantize(word: FixedPointWord) -> float:
    return word.value


def quantize_array(values: Iterable[float], n_bits: int) -> np.ndarray:
    """Vectorized ``quantize`` returning integer codes."""
    _check_width(n_bits)
    array = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(array)):
        raise ValueError("cannot quantize non-finite values")
    scale = 1 << (n_bits - 1)
    codes = np.ceil(array * scale - 0.5)
    return np.clip(codes, -scale, scale - 1).astype(np.int64)


def dequantize_codes(codes: Iterable[int], n_bits: int) -> np.ndarray:
    _check_width(n_bits)
    return np.asarray(codes, dtype=float) / (1 << (n_bits - 1))


def words_from_values(values: Iterable[float], n_bits: int):
    return tuple(FixedPointWord(code=int(c), n_bits=n_bits) for c in quantize_array(values, n_bits))


def expand_input_weights(effective: float, n_bits: int, literal: bool = False) -> np.ndarray:
    """
    Per-bit input weights, least significant bit first.

    Bit ``j < n-1`` gets ``2**j * s * effective`` and the sign bit gets
    ``-2**(n-1) * s * effective``. With the default ``s = 2**(1-n)`` the
    weighted bit sum equals ``effective * value`` for every code; with
    ``literal=True`` ``s = 1`` and the sum is ``2**(n-1)`` times larger.
    """
    _check_width(n_bits)
    scale = 1.0 if literal else 2.0 ** (1 - n_bits)
    weights = np.array([2.0 ** j for j in range(n_bits)]) * scale * effective
    weights[-1] = -weights[-1]
    return weights


def code_bits(code: int, n_bits: int) -> np.ndarray:
    """Two's-complement bits of ``code`` as a 0/1 vector, LSB first."""
    raw = code & ((1 << n_bits) - 1)
    return np.array([(raw >> j) & 1 for j in range(n_bits)], dtype=np.int64)


def to_output_word(weight: float, n_bits: int) -> int:
    """
    Saturating output-weight code: ``2 * n_bits`` wide with ``n_bits - 1``
    fractional bits, ties toward negative infinity.
    """
    _check_width(n_bits)
    if not math.isfinite(weight):
        raise ValueError(f"cannot encode non-finite weight {weight!r}")
    width = 2 * n_bits
    code = math.ceil(weight * (1 << (n_bits - 1)) - 0.5)
    half = 1 << (width - 1)
    return min(max(code, -half), half - 1)
