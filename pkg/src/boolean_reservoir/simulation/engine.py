"""
Common interface of the Glass-model engines.

An engine owns the state of one network. Callers schedule input-word
edges with ``set_input`` and move time forward with ``advance``, which
processes every event strictly before the requested time. Time is kept
as integer femtoseconds so event ordering is exact.
"""

import logging
from abc import ABC, abstractmethod
from typing import List, Optional, Tuple

import numpy as np

from ..exceptions import SimulationError
from ..models import EngineKind, ReservoirSpec
from .glass import NetworkTables, ns_to_fs

logger = logging.getLogger(__name__)

Transition = Tuple[int, int, bool]


class GlassEngine(ABC):
    """Base class holding the state both engines share."""

    kind: EngineKind

    def __init__(self, spec: ReservoirSpec, *, max_events: int = 1_000_000,
                 jitter_seed: Optional[int] = None):
        self.spec = spec
        self.tables = NetworkTables.from_spec(spec, jitter_seed=jitter_seed)
        self.max_events = max_events
        self.n_bits = spec.input_bits
        self._word_mask = (1 << self.n_bits) - 1
        self._input_nodes = spec.input_nodes
        self.now_fs = 0
        self.transitions: List[Transition] = []

    @property
    def n_nodes(self) -> int:
        return self.tables.n_nodes

    @property
    @abstractmethod
    def boolean_state(self) -> np.ndarray:
        """Node outputs ``X`` at the current time."""

    @abstractmethod
    def continuous_state(self) -> np.ndarray:
        """Node variables ``x`` at the current time."""

    @abstractmethod
    def _schedule_word(self, word_unsigned: int, t_fs: int) -> None:
        ...

    @abstractmethod
    def _advance_fs(self, t_fs: int) -> None:
        ...

    def set_input(self, code: int, t_ns: float) -> None:
        """Apply input word ``code`` from ``t_ns`` on."""
        half = 1 << (self.n_bits - 1)
        if not -half <= code < half:
            raise SimulationError(f"input code {code} does not fit in {self.n_bits} bits")
        t_fs = ns_to_fs(t_ns)
        if t_fs < self.now_fs:
            raise SimulationError(f"input edge at {t_ns} ns lies before the current time")
        self._schedule_word(code & self._word_mask, t_fs)

    def advance(self, t_ns: float) -> None:
        """Process all events strictly before ``t_ns``."""
        t_fs = ns_to_fs(t_ns)
        if t_fs < self.now_fs:
            raise SimulationError(f"cannot advance backwards to {t_ns} ns")
        self._advance_fs(t_fs)
        self.now_fs = t_fs

    def _check_finite(self, values: np.ndarray) -> np.ndarray:
        if not np.all(np.isfinite(values)):
            bad = np.flatnonzero(~np.isfinite(values)).tolist()
            raise SimulationError(f"non-finite node state at {self.now_fs} fs in nodes {bad}")
        return values

    def sorted_transitions(self) -> List[Transition]:
        return sorted(self.transitions, key=lambda item: (item[0], item[1]))
