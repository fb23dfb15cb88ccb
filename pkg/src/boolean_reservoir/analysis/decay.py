"""
Fading-memory decay time.

Two input sequences share their samples from ``t = 0`` on and differ
before it. Once both copies of the reservoir see the same input, the
Euclidean distance between their Boolean states decays; its time constant
``lambda`` is obtained from a straight-line fit of the log distance.

Per repetition ``r`` (seeded from ``SeedSequence([seed, r])``):

* ``u1`` is drawn uniform on ``[-1, 1]`` for all ``2 * n_samples_each_side``
  slots and ``u2`` copies it from slot 0 on, with fresh draws before;
* ``d(t)`` is sampled on the record grid for ``t >= 0`` and smoothed with a
  centered five-sample moving average (shorter windows at the edges);
* the fit covers the first 80% of the samples preceding the point where the
  smoothed distance reaches zero for good, capped by ``fit_window_ns``.
"""

import logging
import math
import warnings
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from ..exceptions import AnalysisError
from ..models import (
    DecayConfig,
    DecayResult,
    DecayTrend,
    Hyperparams,
    InputSchedule,
    ReservoirSpec,
    SimulationSettings,
)
from ..network import attach_luts, build_reservoir
from ..parallel import run_keyed
from ..readout.fixed_point import words_from_values
from ..simulation import reference_step_ns, simulate

logger = logging.getLogger(__name__)

SMOOTHING_WINDOW = 5
FIT_FRACTION = 0.8


def decay_distance(states_1: np.ndarray, states_2: np.ndarray) -> np.ndarray:
    """``||X1 - X2||_2`` per record for Boolean state matrices of equal shape."""
    states_1 = np.asarray(states_1, dtype=bool)
    states_2 = np.asarray(states_2, dtype=bool)
    if states_1.shape != states_2.shape:
        raise ValueError(f"state shapes differ: {states_1.shape} vs {states_2.shape}")
    return np.sqrt(np.count_nonzero(states_1 != states_2, axis=1).astype(float))


def moving_average(values: np.ndarray, window: int = SMOOTHING_WINDOW) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    half = window // 2
    kernel = np.ones(window)
    sums = np.convolve(values, kernel, mode="full")[half:half + values.size]
    counts = np.convolve(np.ones(values.size), kernel, mode="full")[half:half + values.size]
    return sums / counts


def fit_decay(times_ns: Sequence[float], distances: Sequence[float],
              fit_window_ns: Optional[float] = None) -> Optional[float]:
    """
    Fitted decay time in ns, or ``None`` when the distance never leaves
    zero, fewer than two points are usable or the fit does not decay.
    """
    times = np.asarray(times_ns, dtype=float)
    smoothed = moving_average(distances)
    nonzero = np.flatnonzero(smoothed > 0)
    if nonzero.size == 0:
        return None
    count = int(nonzero[-1]) + 1
    n_fit = min(count, max(2, math.ceil(FIT_FRACTION * count)))
    t = times[:n_fit] - times[0]
    s = smoothed[:n_fit]
    keep = s > 0
    if fit_window_ns is not None:
        keep &= t <= fit_window_ns
    if np.count_nonzero(keep) < 2:
        return None
    slope, _ = np.polyfit(t[keep], np.log(s[keep]), 1)
    if slope >= 0:
        return None
    return float(-1.0 / slope)


def _repetition_inputs(n_side: int, seed: int, repetition: int) -> Tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(np.random.SeedSequence([seed, repetition]))
    u1 = rng.uniform(-1.0, 1.0, size=2 * n_side)
    u2 = u1.copy()
    u2[:n_side] = rng.uniform(-1.0, 1.0, size=n_side)
    return u1, u2


def _decay_repetition(spec: ReservoirSpec, cfg: DecayConfig, t_sample_ns: float,
                      settings: SimulationSettings, seed: int,
                      repetition: int) -> Tuple[Optional[float], str]:
    n_side = cfg.n_samples_each_side
    u1, u2 = _repetition_inputs(n_side, seed, repetition)
    run = settings.run_config(
        duration_ns=2 * n_side * t_sample_ns,
        record_grid_ns=t_sample_ns,
        step_ns=reference_step_ns(spec, t_sample_ns),
    )
    traces = [
        simulate(spec, InputSchedule(sample_period_ns=t_sample_ns,
                                     words=words_from_values(u, spec.input_bits)), run)
        for u in (u1, u2)
    ]
    d = decay_distance(traces[0].boolean_states[n_side:], traces[1].boolean_states[n_side:])
    if not np.any(d):
        return None, "states never differ"
    times = traces[0].times_ns[n_side:]
    lam = fit_decay(times, d, cfg.fit_window_ns)
    if lam is None:
        return None, "distance does not decay"
    return lam, ""


def measure_decay_time(spec: ReservoirSpec, cfg: DecayConfig, t_sample_ns: float = 6.25, *,
                       settings: Optional[SimulationSettings] = None, seed: int = 0,
                       max_workers: Optional[int] = None) -> DecayResult:
    """Mean decay time and its standard error over the usable repetitions."""
    cfg.check_window(t_sample_ns)
    settings = settings or SimulationSettings()
    if not spec.luts:
        spec = attach_luts(spec)
    tasks = {rep: (spec, cfg, t_sample_ns, settings, seed, rep) for rep in range(cfg.repetitions)}
    outcomes = run_keyed(_decay_repetition, tasks, max_workers)

    lambdas: List[float] = []
    for rep, (lam, reason) in outcomes.items():
        if lam is None:
            message = f"Decay repetition {rep} discarded: {reason}"
            warnings.warn(message, RuntimeWarning, stacklevel=2)
            logger.warning(message)
        else:
            lambdas.append(lam)
    if not lambdas:
        raise AnalysisError(f"all {cfg.repetitions} decay repetitions were discarded", stage="decay")

    values = np.array(lambdas)
    stderr = float(values.std(ddof=1) / math.sqrt(values.size)) if values.size > 1 else 0.0
    result = DecayResult(
        lambda_ns=float(values.mean()),
        stderr=stderr,
        n_used=values.size,
        n_discarded=cfg.repetitions - values.size,
        lambdas=tuple(lambdas),
    )
    logger.info("Decay time %.3f +/- %.3f ns from %d repetitions",
                result.lambda_ns, result.stderr, result.n_used)
    return result


def decay_trend(tau_values: Sequence[float], lambdas: Sequence[float]) -> DecayTrend:
    """Least-squares line ``lambda = slope * tau_bar + intercept``."""
    x = np.asarray(tau_values, dtype=float)
    y = np.asarray(lambdas, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("tau values and decay times must be vectors of equal length")
    if np.unique(x).size < 2:
        raise ValueError("a trend needs at least two distinct mean delays")
    fit = stats.linregress(x, y)
    return DecayTrend(
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        r_squared=float(fit.rvalue ** 2),
        slope_stderr=float(fit.stderr),
    )


def decay_versus_delay(base: Hyperparams, tau_values: Sequence[float], cfg: DecayConfig,
                       t_sample_ns: float = 6.25, *,
                       settings: Optional[SimulationSettings] = None,
                       max_workers: Optional[int] = None) -> Tuple[List[DecayResult], DecayTrend]:
    """Measure ``lambda`` at each mean delay on reservoirs built from ``base``."""
    results = []
    for tau in tau_values:
        hp = Hyperparams(**{**base.model_dump(), "mean_delay_ns": float(tau)})
        spec = build_reservoir(hp)
        results.append(measure_decay_time(spec, cfg, t_sample_ns, settings=settings,
                                          seed=base.seed, max_workers=max_workers))
    trend = decay_trend(tau_values, [r.lambda_ns for r in results])
    logger.info("Decay trend slope %.3f +/- %.3f (R^2 %.3f)",
                trend.slope, trend.slope_stderr, trend.r_squared)
    return results, trend
