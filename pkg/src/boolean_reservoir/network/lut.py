"""
Truth tables of reservoir nodes.

Node ``i`` outputs ``Theta(sum_j W[i, j] X_j + sum_b w_b u_b)`` where the
``u_b`` are the bits of the current input word and ``w_b`` the per-bit
input weights. The table index puts the input word (unsigned two's
complement) in the most significant field, followed by the node's
recurrent sources in ascending index order with the first source most
significant. Position 0 of the returned string is the all-zeros input.
"""

from typing import Tuple

import numpy as np

from ..models import ReservoirSpec
from ..readout.fixed_point import expand_input_weights

# Sums within this fraction of the row's absolute weight total count as zero.
ZERO_SUM_TOLERANCE = 1e-12


def lut_inputs(spec: ReservoirSpec, node_index: int) -> Tuple[np.ndarray, np.ndarray]:
    """Recurrent and per-bit input weights of one node, in index order."""
    sources = spec.sources(node_index)
    recurrent = np.asarray(spec.weights[node_index, list(sources)], dtype=float)
    bit_weights = expand_input_weights(
        float(spec.input_weights_effective[node_index]),
        spec.input_bits,
        literal=spec.literal_input_weights,
    )
    return recurrent, bit_weights


def input_matrix(k: int, n_bits: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Bit patterns of every table row.

    Returns ``(recurrent_bits, input_bits)`` with shapes ``(2**(k+n), k)``
    and ``(2**(k+n), n)``; input bits are least significant first.
    """
    index = np.arange(2 ** (k + n_bits), dtype=np.int64)[:, None]
    recurrent = (index >> (k - 1 - np.arange(k))) & 1
    word = (index >> (k + np.arange(n_bits))) & 1
    return recurrent, word


def lut_index(input_code_unsigned: int, source_bits: Tuple[int, ...]) -> int:
    """Table row for an input word and the source bits (first source first)."""
    index = input_code_unsigned
    for bit in source_bits:
        index = (index << 1) | bit
    return index


def derive_lut(spec: ReservoirSpec, node_index: int) -> str:
    """Truth table of node ``node_index`` as a 0/1 string of length ``2**(k+n)``."""
    if not 0 <= node_index < spec.n_nodes:
        raise IndexError(f"node index {node_index} out of range for {spec.n_nodes} nodes")
    recurrent, bit_weights = lut_inputs(spec, node_index)
    recurrent_bits, word_bits = input_matrix(recurrent.size, spec.input_bits)
    drive = recurrent_bits @ recurrent + word_bits @ bit_weights
    tolerance = ZERO_SUM_TOLERANCE * (np.abs(recurrent).sum() + np.abs(bit_weights).sum())
    return "".join("1" if value > tolerance else "0" for value in drive)


def attach_luts(spec: ReservoirSpec) -> ReservoirSpec:
    """Copy of ``spec`` with every node's LUT derived from its weights."""
    luts = tuple(derive_lut(spec, i) for i in range(spec.n_nodes))
    return ReservoirSpec.model_validate({**spec.model_dump(), "luts": luts})


def lut_array(lut: str) -> np.ndarray:
    return np.frombuffer(lut.encode("ascii"), dtype=np.uint8) == ord("1")
