"""
Fixed-step reference engine.

Time advances on a uniform clock of step ``h``. Every node keeps a ring of
its past Boolean outputs, one entry per step, and a link of delay ``d``
reads its source ``m = round(d / h)`` steps back. Each step, for all nodes
at once:

1. read the delayed source outputs and the current input word,
2. evaluate the LUT,
3. relax ``x`` toward the LUT output for one step,
4. threshold ``x`` into the new output and push it into the ring.

A node whose output changes during step ``n`` is stamped at the end of
that step, ``(n + 1) * h``. Nothing here solves for crossing instants, so
the engine serves as an independent check on the event-driven one.
"""

import logging
from typing import Dict, Optional

import numpy as np

from ..exceptions import ConfigurationError, SimulationError
from ..models import FS_PER_NS, EngineKind, ReservoirSpec
from .engine import GlassEngine
from .glass import ns_to_fs

logger = logging.getLogger(__name__)

# Minimum number of steps per node time constant.
MIN_STEPS_PER_GAMMA = 20


class FixedStepEngine(GlassEngine):
    """Reference engine on a uniform time grid."""

    kind = EngineKind.FIXED_STEP

    def __init__(self, spec: ReservoirSpec, step_ns: float, *, max_events: int = 1_000_000,
                 jitter_seed: Optional[int] = None):
        super().__init__(spec, max_events=max_events, jitter_seed=jitter_seed)
        self.step_fs = ns_to_fs(step_ns)
        if self.step_fs <= 0:
            raise ConfigurationError(f"step {step_ns} ns is below the 1 fs time resolution")
        gamma_min = float(self.tables.gammas.min())
        if step_ns > gamma_min / MIN_STEPS_PER_GAMMA:
            raise ConfigurationError(
                f"step {step_ns} ns exceeds min(gamma)/{MIN_STEPS_PER_GAMMA} = "
                f"{gamma_min / MIN_STEPS_PER_GAMMA:.6g} ns"
            )
        min_delay = self.tables.min_delay_fs
        if min_delay is not None and min_delay <= self.step_fs:
            raise ConfigurationError("every link delay must exceed one step")

        tables = self.tables
        n = self.n_nodes
        links = [(src, link) for src, out in enumerate(tables.outgoing) for link in out]
        self._link_sources = np.array([src for src, _ in links], dtype=np.int64)
        self._link_destinations = np.array([link.destination for _, link in links], dtype=np.int64)
        self._link_weights = np.array(
            [tables.slot_mask(link.destination, link.slot) for _, link in links], dtype=np.int64
        )
        self._link_steps = np.array(
            [int(round(link.delay_fs / self.step_fs)) for _, link in links], dtype=np.int64
        )
        self._depth = int(self._link_steps.max(initial=0)) + 1
        self._history = np.zeros((self._depth, n), dtype=bool)

        sizes = [lut.size for lut in tables.luts]
        self._lut_flat = np.concatenate(tables.luts) if sizes else np.zeros(0, dtype=bool)
        self._lut_offsets = np.concatenate([[0], np.cumsum(sizes)[:-1]]).astype(np.int64)
        self._degrees = np.array(tables.degrees, dtype=np.int64)
        self._is_input = np.zeros(n, dtype=bool)
        self._is_input[list(self._input_nodes)] = True
        self._word_terms = np.zeros(n, dtype=np.int64)

        self._decay = np.exp(-(self.step_fs / FS_PER_NS) / tables.gammas)
        self._thresholds = tables.thresholds
        self._x = np.zeros(n)
        self._output = np.zeros(n, dtype=bool)
        self._pending_words: Dict[int, int] = {}
        self._step_index = 0

    @property
    def boolean_state(self) -> np.ndarray:
        return self._output.copy()

    def _schedule_word(self, word_unsigned: int, t_fs: int) -> None:
        if t_fs % self.step_fs:
            raise SimulationError(
                f"input edge at {t_fs} fs is not on the {self.step_fs} fs step grid"
            )
        self._pending_words[t_fs // self.step_fs] = word_unsigned
        if len(self._pending_words) > self.max_events:
            raise SimulationError(
                f"more than {self.max_events} input edges pending at {self.now_fs} fs"
            )

    def _advance_fs(self, t_fs: int) -> None:
        if t_fs % self.step_fs:
            raise SimulationError(
                f"fixed-step engine can only stop on step boundaries; {t_fs} fs is not a "
                f"multiple of {self.step_fs} fs"
            )
        stop = t_fs // self.step_fs
        while self._step_index < stop:
            self._step()

    def _step(self) -> None:
        n = self._step_index
        word = self._pending_words.pop(n, None)
        if word is not None:
            self._word_terms = np.where(self._is_input, word << self._degrees, 0)

        bits = self._history[(n - 1 - self._link_steps) % self._depth, self._link_sources]
        source_terms = np.bincount(self._link_destinations, weights=bits * self._link_weights,
                                   minlength=self.n_nodes).astype(np.int64)
        levels = self._lut_flat[self._lut_offsets + self._word_terms + source_terms].astype(float)

        self._x = levels + (self._x - levels) * self._decay
        output = self._x >= self._thresholds
        changed = np.flatnonzero(output != self._output)
        if changed.size:
            stamp = (n + 1) * self.step_fs
            self.transitions.extend((stamp, int(node), bool(output[node])) for node in changed)
        self._output = output
        self._history[n % self._depth] = output
        self._step_index = n + 1

    def continuous_state(self) -> np.ndarray:
        return self._check_finite(self._x.copy())
