"""
One-dimensional hyperparameter sweeps.

Every grid point builds ``reservoirs_per_point`` reservoirs whose seeds
come from ``SeedSequence([base_seed, point, reservoir])``. Each reservoir
is trained once, scored on ``trials_per_reservoir`` prediction trials and
its decay time is measured. Runs execute in a process pool and are
aggregated in key order, so a table is reproducible from the grid and the
base seed alone.

Import this module directly; it depends on the prediction pipeline, which
itself uses the metrics of this package.
"""

import csv
import io
import logging
import math
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..exceptions import ReservoirLabError
from ..experiment import PredictionTask, prediction_dataset, run_prediction
from ..models import (
    DecayConfig,
    Hyperparams,
    MgParams,
    SimulationSettings,
    SweepGrid,
    SweepRow,
    TimeSeries,
)
from ..network import build_reservoir
from ..parallel import run_keyed
from .decay import measure_decay_time

logger = logging.getLogger(__name__)

RunKey = Tuple[int, int]


def run_seed(base_seed: int, point: int, reservoir: int) -> int:
    """64-bit construction seed of one sweep run."""
    state = np.random.SeedSequence([base_seed, point, reservoir]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def point_hyperparams(base: Hyperparams, grid: SweepGrid, value: Union[int, float], seed: int) -> Hyperparams:
    cast = int(value) if grid.axis.field_name == "in_degree" else float(value)
    return Hyperparams(**{**base.model_dump(), grid.axis.field_name: cast, "seed": seed})


def _sweep_run(hp: Hyperparams, series: TimeSeries, task: PredictionTask,
               settings: SimulationSettings, decay: Optional[DecayConfig],
               decay_seed: int) -> Tuple[List[float], Optional[float], str]:
    try:
        report = run_prediction(build_reservoir(hp), series, task, settings)
        lam = None
        if decay is not None:
            lam = measure_decay_time(report.spec, decay, task.t_sample_ns, settings=settings,
                                     seed=decay_seed, max_workers=1).lambda_ns
        return report.nrmse_values, lam, ""
    except (ReservoirLabError, ValueError) as e:
        return [], None, f"seed {hp.seed}: {e}"


def _stderr(values: Sequence[float]) -> float:
    if len(values) < 2:
        return 0.0
    return float(np.std(values, ddof=1) / math.sqrt(len(values)))


def _aggregate(grid: SweepGrid, value: float, outcomes: List[Tuple[List[float], Optional[float], str]]) -> SweepRow:
    scores = [s for nrmses, _, _ in outcomes for s in nrmses]
    lambdas = [lam for _, lam, _ in outcomes if lam is not None]
    errors = tuple(err for _, _, err in outcomes if err)
    nan = float("nan")
    return SweepRow(
        axis=grid.axis,
        value=float(value),
        nrmse_mean=float(np.mean(scores)) if scores else nan,
        nrmse_stderr=_stderr(scores) if scores else nan,
        nrmse_median=float(np.median(scores)) if scores else nan,
        lambda_mean=float(np.mean(lambdas)) if lambdas else nan,
        lambda_stderr=_stderr(lambdas) if lambdas else nan,
        n_runs=len(outcomes),
        n_failed=len(errors),
        errors=errors,
    )


def run_sweep(grid: SweepGrid, base: Hyperparams, task: PredictionTask, mg: MgParams, *,
              settings: Optional[SimulationSettings] = None,
              decay: Optional[DecayConfig] = None,
              base_seed: Optional[int] = None,
              series: Optional[TimeSeries] = None,
              max_workers: Optional[int] = None) -> List[SweepRow]:
    """
    Evaluate every grid point; returns one row per point in grid order.

    Failed runs are recorded on their row and flag it instead of aborting
    the sweep.
    """
    settings = settings or SimulationSettings()
    base_seed = base.seed if base_seed is None else base_seed
    task = task.model_copy(update={"trials": grid.trials_per_reservoir})

    hps: Dict[RunKey, Hyperparams] = {}
    for p, value in enumerate(grid.values):
        for r in range(grid.reservoirs_per_point):
            hps[(p, r)] = point_hyperparams(base, grid, value, run_seed(base_seed, p, r))
    if series is None:
        longest = max(hp.mean_delay_ns for hp in hps.values())
        series = prediction_dataset(mg, task, task.required_samples(longest))

    tasks = {key: (hp, series, task, settings, decay, base_seed) for key, hp in hps.items()}
    logger.info("Sweeping %s over %d points x %d reservoirs", grid.axis.value,
                len(grid.values), grid.reservoirs_per_point)
    outcomes = run_keyed(_sweep_run, tasks, max_workers)

    rows = []
    for p, value in enumerate(grid.values):
        point = [outcomes[(p, r)] for r in range(grid.reservoirs_per_point)]
        row = _aggregate(grid, value, point)
        for error in row.errors:
            logger.warning("Sweep %s=%s run failed: %s", grid.axis.value, value, error)
        logger.info("%s=%s: median NRMSE %.4f, lambda %.3f ns",
                    grid.axis.value, value, row.nrmse_median, row.lambda_mean)
        rows.append(row)
    return rows


def sweep_csv(rows: Sequence[SweepRow], path: Union[str, Path, None] = None,
              header: Sequence[str] = ()) -> str:
    buffer = io.StringIO()
    for line in header:
        buffer.write(f"# {line}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(SweepRow.csv_columns())
    for row in rows:
        writer.writerow(row.csv_row())
    text = buffer.getvalue()
    if path is not None:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    return text
