"""
The three-node, one-bit hardware example network.

Link delays are given in units of ``2 * tau_inv``. The listed input
weights are the weights of the single input bit, which for a one-bit
word is the sign bit; the effective input weight is therefore their
negation.
"""

import numpy as np

from ..models import DEFAULT_INVERTER_DELAY_NS, ReservoirSpec
from ..models.core import DEFAULT_NODE_GAMMA_MEAN_NS, DEFAULT_NODE_THRESHOLD
from .lut import attach_luts

EXAMPLE_WEIGHTS = np.array([
    [0.1, 0.3, 0.0],
    [-0.2, 0.0, 0.1],
    [-0.3, 0.2, 0.0],
])
EXAMPLE_INPUT_BIT_WEIGHTS = np.array([0.1, -0.2, 0.2])
EXAMPLE_DELAY_PAIRS = np.array([
    [10, 15, 0],
    [6, 0, 7],
    [12, 10, 0],
])
EXAMPLE_LUTS = ("01111111", "01000000", "01001101")


def hardware_example_spec(inverter_delay_ns: float = DEFAULT_INVERTER_DELAY_NS) -> ReservoirSpec:
    n = EXAMPLE_WEIGHTS.shape[0]
    spec = ReservoirSpec(
        input_bits=1,
        weights=EXAMPLE_WEIGHTS,
        input_weights_effective=-EXAMPLE_INPUT_BIT_WEIGHTS,
        link_delays_ns=EXAMPLE_DELAY_PAIRS * 2.0 * inverter_delay_ns,
        node_time_constants_ns=np.full(n, DEFAULT_NODE_GAMMA_MEAN_NS),
        node_thresholds=np.full(n, DEFAULT_NODE_THRESHOLD),
        inverter_delay_ns=inverter_delay_ns,
    )
    return attach_luts(spec)
