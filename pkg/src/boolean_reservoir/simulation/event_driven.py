"""
Event-driven Glass-model engine.

A heap orders events by ``(time_fs, node, kind, sequence)``: at equal
times nodes are served in ascending index and a node's threshold crossing
precedes its arrivals. A crossing is scheduled whenever a node's target
changes; a later target change bumps the node's version, which lazily
cancels the pending crossing (short-pulse rejection).
"""

import heapq
import itertools
import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from ..exceptions import SimulationError
from ..models import FS_PER_NS, EngineKind, ReservoirSpec
from .engine import GlassEngine
from .glass import ns_to_fs, relax_node, time_to_flip

logger = logging.getLogger(__name__)

CROSSING = 0
ARRIVAL = 1


class EventDrivenEngine(GlassEngine):
    """Production engine: cost scales with the number of transitions."""

    kind = EngineKind.EVENT_DRIVEN

    def __init__(self, spec: ReservoirSpec, *, max_events: int = 1_000_000,
                 jitter_seed: Optional[int] = None):
        super().__init__(spec, max_events=max_events, jitter_seed=jitter_seed)
        n = self.n_nodes
        self._output = [False] * n
        self._target = [self.tables.target(i, 0, 0) for i in range(n)]
        self._source_bits = [0] * n
        self._word = [0] * n
        self._queue: List[Tuple[int, int, int, int, object]] = []
        self._sequence = itertools.count()
        self._version = [0] * n
        self._x = [0.0] * n
        self._synced_fs = [0] * n
        for node in range(n):
            self._schedule_crossing(node, 0)

    def _push(self, t_fs: int, node: int, kind: int, payload) -> None:
        heapq.heappush(self._queue, (t_fs, node, kind, next(self._sequence), payload))
        if len(self._queue) > self.max_events:
            raise SimulationError(
                f"event queue exceeded {self.max_events} pending events at {self.now_fs} fs"
            )

    def _sync(self, node: int, t_fs: int) -> None:
        elapsed = (t_fs - self._synced_fs[node]) / FS_PER_NS
        if elapsed:
            x = relax_node(self._x[node], self._target[node], elapsed,
                           self.tables.gammas[node])
            if not math.isfinite(x):
                raise SimulationError(f"non-finite state of node {node} at {t_fs} fs")
            self._x[node] = x
        self._synced_fs[node] = t_fs

    def _schedule_crossing(self, node: int, t_fs: int) -> None:
        dt = time_to_flip(self._x[node], self._output[node], self._target[node],
                          self.tables.thresholds[node], self.tables.gammas[node])
        if dt is not None:
            self._push(t_fs + ns_to_fs(dt), node, CROSSING, self._version[node])

    @property
    def boolean_state(self) -> np.ndarray:
        return np.array(self._output, dtype=bool)

    def _apply_arrival(self, node: int, slot: int, value: int) -> None:
        if slot < 0:
            self._word[node] = value
            return
        mask = self.tables.slot_mask(node, slot)
        if value:
            self._source_bits[node] |= mask
        else:
            self._source_bits[node] &= ~mask

    def _lut_target(self, node: int) -> bool:
        return self.tables.target(node, self._word[node], self._source_bits[node])

    def _schedule_word(self, word_unsigned: int, t_fs: int) -> None:
        for node in self._input_nodes:
            self._push(t_fs, node, ARRIVAL, (-1, word_unsigned))

    def _advance_fs(self, t_fs: int) -> None:
        queue = self._queue
        outgoing = self.tables.outgoing
        while queue and queue[0][0] < t_fs:
            time, node, kind, _, payload = heapq.heappop(queue)
            if kind == CROSSING:
                if payload != self._version[node]:
                    continue
                self._sync(node, time)
                value = self._target[node]
                self._output[node] = value
                self.transitions.append((time, node, value))
                for link in outgoing[node]:
                    self._push(time + link.delay_fs, link.destination, ARRIVAL,
                               (link.slot, int(value)))
            else:
                slot, value = payload
                self._sync(node, time)
                self._apply_arrival(node, slot, value)
                target = self._lut_target(node)
                if target != self._target[node]:
                    self._target[node] = target
                    self._version[node] += 1
                    self._schedule_crossing(node, time)

    def continuous_state(self) -> np.ndarray:
        now = self.now_fs
        values = np.array([
            relax_node(self._x[i], self._target[i], (now - self._synced_fs[i]) / FS_PER_NS,
                       self.tables.gammas[i])
            for i in range(self.n_nodes)
        ])
        return self._check_finite(values)
