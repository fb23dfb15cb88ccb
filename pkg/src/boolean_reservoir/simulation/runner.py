"""
Run a reservoir under a piecewise-constant input schedule.
"""

import logging
import math
from typing import List, Optional

import numpy as np

from ..exceptions import ConfigurationError
from ..models import EngineKind, InputSchedule, ReservoirSpec, SimConfig, StateTrace
from .engine import GlassEngine
from .event_driven import EventDrivenEngine
from .fixed_step import FixedStepEngine
from .glass import ns_to_fs

logger = logging.getLogger(__name__)


def make_engine(spec: ReservoirSpec, cfg: SimConfig) -> GlassEngine:
    jitter_seed = cfg.jitter_seed if cfg.jitter else None
    if cfg.engine == EngineKind.FIXED_STEP:
        return FixedStepEngine(spec, cfg.step_ns, max_events=cfg.max_events, jitter_seed=jitter_seed)
    return EventDrivenEngine(spec, max_events=cfg.max_events, jitter_seed=jitter_seed)


def reference_step_ns(spec: ReservoirSpec, t_sample_ns: float, divisor: int = 50) -> float:
    """Largest step dividing ``t_sample_ns`` that is at most ``min(gamma)/divisor``."""
    limit_fs = ns_to_fs(float(np.min(spec.node_time_constants_ns)) / divisor)
    period_fs = ns_to_fs(t_sample_ns)
    if limit_fs <= 0:
        raise ConfigurationError("node time constants are too short for the 1 fs resolution")
    steps = math.ceil(period_fs / limit_fs)
    while period_fs % steps:
        steps += 1
    return (period_fs // steps) / 1e6


def _record_times_fs(cfg: SimConfig) -> List[int]:
    grid_fs = ns_to_fs(cfg.record_grid_ns)
    duration_fs = ns_to_fs(cfg.duration_ns)
    return list(range(0, duration_fs + 1, grid_fs))


def simulate(spec: ReservoirSpec, schedule: InputSchedule, cfg: SimConfig) -> StateTrace:
    """
    Drive ``spec`` with ``schedule`` from the all-zero state.

    A record at time ``t`` holds the state reached by all events strictly
    before ``t``; the input edge at ``t`` is applied after it. The last
    word is held once the schedule runs out.
    """
    if schedule.n_bits is not None and schedule.n_bits != spec.input_bits:
        raise ConfigurationError(
            f"schedule words have {schedule.n_bits} bits but the spec expects {spec.input_bits}"
        )
    if cfg.engine == EngineKind.FIXED_STEP:
        step_fs = ns_to_fs(cfg.step_ns)
        if step_fs <= 0:
            raise ConfigurationError(f"step {cfg.step_ns} ns is below the 1 fs time resolution")
        if ns_to_fs(cfg.record_grid_ns) % step_fs or ns_to_fs(schedule.sample_period_ns) % step_fs:
            raise ConfigurationError(
                "record grid and sample period must be integer multiples of the step"
            )

    engine = make_engine(spec, cfg)
    records = _record_times_fs(cfg)
    period_fs = ns_to_fs(schedule.sample_period_ns)
    duration_fs = ns_to_fs(cfg.duration_ns)
    edges = {m * period_fs: word.code for m, word in enumerate(schedule.words)
             if m * period_fs <= duration_fs}
    record_set = set(records)

    states = []
    continuous = [] if cfg.engine == EngineKind.FIXED_STEP else None
    for t_fs in sorted(record_set | set(edges)):
        engine.advance(t_fs / 1e6)
        if t_fs in record_set:
            states.append(engine.boolean_state)
            if continuous is not None:
                continuous.append(engine.continuous_state())
        if t_fs in edges:
            engine.set_input(edges[t_fs], t_fs / 1e6)

    transitions = engine.sorted_transitions()
    logger.debug("Simulated %d transitions over %g ns with %s engine",
                 len(transitions), cfg.duration_ns, engine.kind.value)
    return StateTrace(
        engine=engine.kind,
        times_ns=np.array(records, dtype=float) / 1e6,
        boolean_states=np.array(states, dtype=bool).reshape(len(records), spec.n_nodes),
        continuous_states=None if continuous is None else np.array(continuous),
        transition_times_fs=np.array([t for t, _, _ in transitions], dtype=np.int64),
        transition_nodes=np.array([n for _, n, _ in transitions], dtype=np.int64),
        transition_values=np.array([v for _, _, v in transitions], dtype=bool),
    )
