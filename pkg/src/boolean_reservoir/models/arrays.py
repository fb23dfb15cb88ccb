"""
Annotated numpy array types for pydantic models.

Arrays are copied on validation, made read-only, and serialized as nested
lists so that models stay immutable and round-trip through JSON.
"""

from typing import Annotated, Any

import numpy as np
from pydantic import BeforeValidator, PlainSerializer


def _readonly(dtype):
    def convert(value: Any) -> np.ndarray:
        array = np.array(value, dtype=dtype)
        array.setflags(write=False)
        return array

    return convert


def _to_list(array: np.ndarray) -> list:
    return array.tolist()


FloatArray = Annotated[
    np.ndarray,
    BeforeValidator(_readonly(float)),
    PlainSerializer(_to_list, return_type=list),
]

IntArray = Annotated[
    np.ndarray,
    BeforeValidator(_readonly(np.int64)),
    PlainSerializer(_to_list, return_type=list),
]

BoolArray = Annotated[
    np.ndarray,
    BeforeValidator(_readonly(bool)),
    PlainSerializer(_to_list, return_type=list),
]
