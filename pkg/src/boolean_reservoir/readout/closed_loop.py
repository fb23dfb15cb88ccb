"""
Clocked operation of the reservoir computer.

At clock edge ``m`` (time ``m * t_sample``) the reservoir state ``X_m`` is
latched before the edge's input word takes effect. With a readout latency
of ``L`` cycles the word applied at edge ``m`` in autonomous mode is the
quantized prediction ``Q(w . [X_{m-L}; u_hat_{m-L}])``, so the output at a
cycle only depends on states and inputs from earlier cycles. Training uses
the matching design rows ``[X_m; u_hat_m]`` with target ``u_{m+L}``.
"""

import csv
import io
import logging
import math
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ..exceptions import SimulationError
from ..models import (
    ClockedRun,
    InputSchedule,
    ReservoirSpec,
    SimConfig,
    TimeSeries,
    TimeUnit,
    TrainedReadout,
)
from ..models.core import DEFAULT_NS_PER_MG_UNIT
from ..simulation.runner import make_engine
from .fixed_point import quantize

logger = logging.getLogger(__name__)


def build_design_matrix(states: np.ndarray, inputs: Sequence[float], targets: Sequence[float],
                        washout: int, latency: int = 1) -> Tuple[np.ndarray, np.ndarray]:
    """
    Rows ``[X_m; u_hat_m]`` for ``washout <= m < len(inputs) - latency``.

    ``states[m]`` is the state latched at edge ``m``; ``inputs`` holds the
    dequantized words and ``targets`` the signal the readout should
    reproduce ``latency`` cycles later.
    """
    states = np.asarray(states)
    inputs = np.asarray(inputs, dtype=float)
    targets = np.asarray(targets, dtype=float)
    count = inputs.size
    if targets.size != count:
        raise ValueError("inputs and targets must have equal length")
    if states.shape[0] < count:
        raise ValueError(f"need a latched state for each of the {count} edges")
    if latency < 1:
        raise ValueError("latency must be at least one cycle")
    stop = count - latency
    if washout < 0 or washout >= stop:
        raise ValueError(f"washout {washout} leaves no training rows out of {count} samples")
    rows = np.column_stack([states[washout:stop].astype(float), inputs[washout:stop]])
    return rows, targets[washout + latency:count]


def design_matrix_csv(rows: np.ndarray, targets: np.ndarray,
                      path: Union[str, Path, None] = None, header: Sequence[str] = ()) -> str:
    buffer = io.StringIO()
    for line in header:
        buffer.write(f"# {line}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    n_states = rows.shape[1] - 1
    writer.writerow([f"x_{i}" for i in range(n_states)] + ["u_direct", "target"])
    for row, target in zip(rows.tolist(), targets.tolist()):
        writer.writerow([repr(v) for v in row] + [repr(target)])
    text = buffer.getvalue()
    if path is not None:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    return text


def run_closed_loop(spec: ReservoirSpec, readout: TrainedReadout, warmup: InputSchedule,
                    horizon_cycles: int, clk: ClockedRun,
                    engine_cfg: Optional[SimConfig] = None,
                    unit_map_ns_per_mg: float = DEFAULT_NS_PER_MG_UNIT) -> TimeSeries:
    """
    Drive with the stored warmup words, then feed predictions back.

    Returns the dequantized predictions of the ``horizon_cycles`` cycles
    following the warmup, time-stamped in nanoseconds.
    """
    if horizon_cycles < 0:
        raise ValueError(f"horizon must be non-negative, got {horizon_cycles}")
    if readout.weights.size != spec.n_nodes + 1:
        raise ValueError(
            f"readout has {readout.weights.size} weights for a {spec.n_nodes}-node reservoir"
        )
    if warmup.n_bits is not None and warmup.n_bits != spec.input_bits:
        raise ValueError("warmup words and spec disagree on the input width")
    if not math.isclose(warmup.sample_period_ns, clk.sample_period_ns):
        raise ValueError("warmup sample period must equal the global clock period")
    n_warm = len(warmup.words)
    latency = clk.latency_cycles
    total = n_warm + horizon_cycles
    if horizon_cycles and n_warm < latency:
        raise ValueError(f"warmup needs at least {latency} words before autonomous operation")
    modes = clk.mode_schedule
    if modes is not None and len(modes) != total:
        raise ValueError(f"mode schedule needs {total} entries, got {len(modes)}")

    t_sample = clk.sample_period_ns
    t0 = n_warm * t_sample
    if horizon_cycles == 0:
        return TimeSeries(t0=t0, dt=t_sample, values=[], units=TimeUnit.NS,
                          unit_map_ns_per_mg=unit_map_ns_per_mg)

    if engine_cfg is None:
        engine_cfg = SimConfig(duration_ns=total * t_sample, record_grid_ns=t_sample)
    engine = make_engine(spec, engine_cfg)
    weights = readout.weights
    n_bits = spec.input_bits
    latched = np.zeros((total, spec.n_nodes + 1))
    outputs = []
    for m in range(total):
        t = m * t_sample
        engine.advance(t)
        stored = m < n_warm
        driven = modes[m] if modes is not None else stored
        if driven:
            if not stored:
                raise ValueError(f"cycle {m} is in training mode but no stored word is left")
            word = warmup.words[m]
        else:
            if m < latency:
                raise ValueError(f"cycle {m} cannot be autonomous before {latency} latched cycles")
            prediction = float(weights @ latched[m - latency])
            if not math.isfinite(prediction):
                raise SimulationError(f"non-finite readout output at cycle {m}")
            word = quantize(prediction, n_bits)
        if m >= n_warm:
            outputs.append(word.value)
        latched[m, :-1] = engine.boolean_state
        latched[m, -1] = word.value
        engine.set_input(word.code, t)

    logger.debug("Closed loop ran %d warmup and %d autonomous cycles", n_warm, horizon_cycles)
    return TimeSeries(t0=t0, dt=t_sample, values=outputs, units=TimeUnit.NS,
                      unit_map_ns_per_mg=unit_map_ns_per_mg)
