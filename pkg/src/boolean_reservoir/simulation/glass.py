"""
Glass-model node dynamics and the per-network tables both engines share.

Each node follows ``gamma * dx/dt = -x + L`` where the target ``L`` is its
LUT output; its Boolean output is ``x >= q``. Under a constant target the
trajectory is the exact exponential relaxation below, so the engines
never integrate numerically.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from ..models import FS_PER_NS, ReservoirSpec
from ..network.lut import lut_array

# Standard deviation of one inverter's delay.
INVERTER_DELAY_SPREAD_NS = 0.05


def relax_node(x0: float, target: bool, dt_ns: float, gamma_ns: float) -> float:
    """State after ``dt_ns`` of relaxation toward ``target``."""
    level = 1.0 if target else 0.0
    return level + (x0 - level) * math.exp(-dt_ns / gamma_ns)


def crossing_time(x0: float, target: bool, q: float, gamma_ns: float) -> Optional[float]:
    """
    Time until a node relaxing toward ``target`` crosses ``q``.

    ``None`` when ``x0`` already lies on the target's side of the threshold
    (``x0 >= q`` for a rising target, ``x0 < q`` for a falling one).
    """
    level = 1.0 if target else 0.0
    if target and x0 >= q:
        return None
    if not target and x0 < q:
        return None
    return gamma_ns * math.log((x0 - level) / (q - level))


def time_to_flip(x: float, output: bool, target: bool, q: float, gamma_ns: float) -> Optional[float]:
    """
    Time until the Boolean output changes, or ``None`` if it never will
    under the current target.
    """
    if output == target:
        return None
    t = crossing_time(x, target, q, gamma_ns)
    return 0.0 if t is None else t


def ns_to_fs(t_ns: float) -> int:
    return int(round(t_ns * FS_PER_NS))


@dataclass(frozen=True)
class OutgoingLink:
    destination: int
    slot: int
    delay_fs: int


@dataclass
class NetworkTables:
    """Flattened spec data indexed by node, as the engines consume it."""

    n_nodes: int
    input_bits: int
    sources: List[Tuple[int, ...]]
    degrees: List[int]
    luts: List[np.ndarray]
    gammas: np.ndarray
    thresholds: np.ndarray
    outgoing: List[List[OutgoingLink]]

    @classmethod
    def from_spec(cls, spec: ReservoirSpec, jitter_seed: Optional[int] = None) -> "NetworkTables":
        if not spec.luts:
            raise ValueError("spec has no LUTs; derive them with attach_luts first")
        n = spec.n_nodes
        rng = np.random.Generator(np.random.PCG64(jitter_seed)) if jitter_seed is not None else None
        pair_ns = 2.0 * spec.inverter_delay_ns
        sources = [spec.sources(i) for i in range(n)]
        outgoing: List[List[OutgoingLink]] = [[] for _ in range(n)]
        for dst in range(n):
            for slot, src in enumerate(sources[dst]):
                delay_ns = float(spec.link_delays_ns[dst, src])
                if rng is not None:
                    pairs = max(1, int(round(delay_ns / pair_ns)))
                    spread = math.sqrt(2 * pairs) * INVERTER_DELAY_SPREAD_NS
                    delay_ns = max(delay_ns + rng.normal(0.0, spread), spec.inverter_delay_ns)
                outgoing[src].append(OutgoingLink(dst, slot, ns_to_fs(delay_ns)))
        return cls(
            n_nodes=n,
            input_bits=spec.input_bits,
            sources=sources,
            degrees=[len(s) for s in sources],
            luts=[lut_array(lut) for lut in spec.luts],
            gammas=np.array(spec.node_time_constants_ns, dtype=float),
            thresholds=np.array(spec.node_thresholds, dtype=float),
            outgoing=outgoing,
        )

    @property
    def min_delay_fs(self) -> Optional[int]:
        delays = [link.delay_fs for links in self.outgoing for link in links]
        return min(delays) if delays else None

    def target(self, node: int, word_unsigned: int, source_bits: int) -> bool:
        """LUT output for an unsigned input word and packed source bits."""
        return bool(self.luts[node][(word_unsigned << self.degrees[node]) | source_bits])

    def slot_mask(self, node: int, slot: int) -> int:
        return 1 << (self.degrees[node] - 1 - slot)
