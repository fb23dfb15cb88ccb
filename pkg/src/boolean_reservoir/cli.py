"""
Command-line entry point: ``boolean-reservoir <command> [options]``.

Commands: generate, train-predict, decay, sweep, spectrum, emit-hdl. Each
writes its artifacts under ``<output_dir>/<command>/``; every CSV and HDL
file carries the config hash and base seed in its header. Exit status is
0 on success, 1 when a stage fails and 2 for usage errors.
"""

import argparse
import csv
import io
import json
import logging
import math
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence

import numpy as np

from config import configure_logging

from .analysis import (
    bounding_box,
    contained_in_box,
    decay_versus_delay,
    delay_embed,
    measure_decay_time,
    peak_offset,
    power_spectrum,
    snap_embed_delay,
)
from .analysis.spectra import embedding_csv, spectrum_csv
from .data import integrate_mg, normalize_mg, resample, write_series_csv
from .data.mackey_glass import DEFAULT_TRANSIENT_MG
from .exceptions import ConfigurationError, ReservoirLabError
from .experiment import (
    PredictionReport,
    PredictionTask,
    free_run,
    prediction_dataset,
    run_prediction,
    train_reservoir,
)
from .experiment_config import ExperimentConfig, canonical_json, config_hash, load_experiment_config
from .hdl import emit, write_bundle
from .models import Hyperparams, ReservoirSpec, SimulationSettings, SweepAxis, TimeSeries, TrainedReadout
from .network import build_reservoir, hardware_example_spec
from .parallel import run_keyed
from .readout.closed_loop import design_matrix_csv

logger = logging.getLogger("boolean_reservoir")

COMMANDS = ("generate", "train-predict", "decay", "sweep", "spectrum", "emit-hdl")


@contextmanager
def stage(name: str) -> Iterator[None]:
    """Log a stage and tag every failure inside it with the stage name."""
    logger.info("[%s] started", name)
    try:
        yield
    except ReservoirLabError as e:
        raise e.with_stage(name)
    except (ValueError, OSError) as e:
        raise ReservoirLabError(str(e), stage=name) from e
    logger.info("[%s] finished", name)


class RunContext:
    """Resolved config plus where and how artifacts are written."""

    def __init__(self, cfg: ExperimentConfig, command: str, max_workers: Optional[int]):
        self.cfg = cfg
        self.command = command
        self.max_workers = max_workers
        self.hash = config_hash(cfg)
        self.out_dir = Path(cfg.output_dir) / command
        self.out_dir.mkdir(parents=True, exist_ok=True)
        (self.out_dir / "config.json").write_text(canonical_json(cfg) + "\n", encoding="utf-8", newline="\n")

    @property
    def provenance(self) -> Dict[str, object]:
        return {"config_hash": self.hash, "seed": self.cfg.seed}

    @property
    def header(self) -> List[str]:
        return [f"{k}={v}" for k, v in self.provenance.items()]

    def path(self, name: str) -> Path:
        return self.out_dir / name

    def write_text(self, name: str, text: str) -> Path:
        path = self.path(name)
        path.write_text(text, encoding="utf-8", newline="\n")
        return path

    def write_json(self, name: str, text: str) -> Path:
        """Model JSON with a leading ``provenance`` object; loaders ignore the extra key."""
        data = {"provenance": self.provenance, **json.loads(text)}
        return self.write_text(name, json.dumps(data, indent=2) + "\n")

    def write_table(self, name: str, columns: Sequence[str], rows: Sequence[Sequence[object]]) -> Path:
        buffer = io.StringIO()
        for line in self.header:
            buffer.write(f"# {line}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows([[repr(v) if isinstance(v, float) else v for v in row] for row in rows])
        return self.write_text(name, buffer.getvalue())


def cmd_generate(ctx: RunContext) -> List[Path]:
    """Raw, normalized and resampled Mackey-Glass series as CSV."""
    cfg = ctx.cfg
    unit_map = cfg.task.unit_map_ns_per_mg
    raw = integrate_mg(cfg.mackey_glass, cfg.generate.duration_mg, transient=DEFAULT_TRANSIENT_MG,
                       unit_map_ns_per_mg=unit_map)
    normalized = normalize_mg(raw)
    sampled = resample(normalized, cfg.task.sample_dt_mg)
    logger.info("Normalized series variance %.4f over %g MG units", normalized.values.var(),
                cfg.generate.duration_mg)
    paths = []
    for name, series in (("mg_raw.csv", raw), ("mg_normalized.csv", normalized),
                         ("mg_resampled.csv", sampled)):
        paths.append(write_series_csv(series, ctx.path(name), ctx.provenance))
    return paths


def _train_predict_seed(hp: Hyperparams, series: TimeSeries, task: PredictionTask,
                        settings: SimulationSettings):
    spec = build_reservoir(hp)
    readout, rows, targets = train_reservoir(spec, series, task, settings)
    report = run_prediction(spec, series, task, settings, readout=readout)
    return report, rows, targets


def _seed_hyperparams(cfg: ExperimentConfig) -> List[Hyperparams]:
    base = cfg.hyperparams
    return [Hyperparams(**{**base.model_dump(), "seed": base.seed + i}) for i in range(cfg.n_seeds)]


def cmd_train_predict(ctx: RunContext, export_design: bool = False) -> List[PredictionReport]:
    cfg = ctx.cfg
    hps = _seed_hyperparams(cfg)
    longest = max(hp.mean_delay_ns for hp in hps)
    series = prediction_dataset(cfg.mackey_glass, cfg.task, cfg.task.required_samples(longest))
    write_series_csv(series, ctx.path("input_series.csv"), ctx.provenance)

    tasks = {i: (hp, series, cfg.task, cfg.simulation) for i, hp in enumerate(hps)}
    outcomes = run_keyed(_train_predict_seed, tasks, ctx.max_workers)

    reports = []
    table = []
    for i, (report, rows, targets) in outcomes.items():
        seed = hps[i].seed
        ctx.write_json(f"spec_{seed}.json", report.spec.to_json())
        ctx.write_json(f"readout_{seed}.json", report.readout.to_json())
        if export_design:
            design_matrix_csv(rows, targets, ctx.path(f"design_{seed}.csv"), ctx.header)
        for trial in report.trials:
            prov = {**ctx.provenance, "reservoir_seed": seed, "trial": trial.trial}
            write_series_csv(trial.prediction, ctx.path(f"prediction_{seed}_{trial.trial}.csv"), prov)
            write_series_csv(trial.truth, ctx.path(f"truth_{seed}_{trial.trial}.csv"), prov)
            table.append([seed, trial.trial, trial.nrmse, report.readout.ridge_param])
        if cfg.plots:
            from .analysis.plotting import plot_prediction

            first = report.trials[0]
            plot_prediction(first.prediction, first.truth, ctx.path(f"prediction_{seed}.svg"),
                            title=f"seed {seed}: NRMSE {first.nrmse:.3f}",
                            provenance={**ctx.provenance, "reservoir_seed": seed})
        reports.append(report)

    ctx.write_table("nrmse.csv", ["reservoir_seed", "trial", "nrmse", "ridge_param"], table)
    scores = [row[2] for row in table]
    logger.info("Median NRMSE over %d trials of %d reservoirs: %.4f",
                len(scores), len(reports), float(np.median(scores)))
    return reports


def cmd_decay(ctx: RunContext) -> Path:
    cfg = ctx.cfg
    t_sample = cfg.task.t_sample_ns
    hp = cfg.hyperparams
    result = measure_decay_time(build_reservoir(hp), cfg.decay, t_sample, settings=cfg.simulation,
                                seed=cfg.seed, max_workers=ctx.max_workers)
    rows = [[hp.mean_delay_ns, result.lambda_ns, result.stderr, result.n_used, result.n_discarded]]
    columns = ["tau_bar_ns", "lambda_ns", "stderr_ns", "n_used", "n_discarded"]
    path = ctx.write_table("decay.csv", columns, rows)

    taus = cfg.decay.tau_bar_values
    if len(set(taus)) >= 2:
        results, trend = decay_versus_delay(hp, taus, cfg.decay, t_sample, settings=cfg.simulation,
                                            max_workers=ctx.max_workers)
        ctx.write_table("decay_vs_tau.csv", columns,
                        [[t, r.lambda_ns, r.stderr, r.n_used, r.n_discarded] for t, r in zip(taus, results)])
        ctx.write_table("decay_trend.csv", ["slope", "intercept", "r_squared", "slope_stderr"],
                        [[trend.slope, trend.intercept, trend.r_squared, trend.slope_stderr]])
        if cfg.plots:
            from .analysis.plotting import plot_decay

            plot_decay(taus, [r.lambda_ns for r in results], [r.stderr for r in results],
                       trend.slope, trend.intercept, ctx.path("decay_vs_tau.svg"),
                       provenance=ctx.provenance)
    return path


def cmd_sweep(ctx: RunContext, axes: Optional[Sequence[str]] = None) -> List[Path]:
    from .analysis.sweep import run_sweep, sweep_csv

    cfg = ctx.cfg
    grids = [g for g in cfg.sweeps if not axes or g.axis.value in axes]
    if not grids:
        raise ConfigurationError(f"no configured sweep matches axes {list(axes or [])}")
    paths = []
    for grid in grids:
        rows = run_sweep(grid, cfg.hyperparams, cfg.task, cfg.mackey_glass, settings=cfg.simulation,
                         decay=cfg.decay, base_seed=cfg.seed, max_workers=ctx.max_workers)
        path = ctx.path(f"sweep_{grid.axis.value}.csv")
        sweep_csv(rows, path, ctx.header)
        paths.append(path)
        if cfg.plots:
            from .analysis.plotting import plot_sweep

            plot_sweep(rows, ctx.path(f"sweep_{grid.axis.value}.svg"), provenance=ctx.provenance)
    return paths


def cmd_spectrum(ctx: RunContext) -> Dict[str, object]:
    """Long autonomous run compared with the true system in MG-frequency units."""
    cfg = ctx.cfg
    task = cfg.task
    hp = cfg.hyperparams
    n_cycles = math.ceil(cfg.spectrum.free_run_lyapunov_times * task.horizon_mg / task.sample_dt_mg)
    series = prediction_dataset(cfg.mackey_glass, task,
                                task.required_samples(hp.mean_delay_ns, extra_cycles=n_cycles))
    spec = build_reservoir(hp)
    readout, _, _ = train_reservoir(spec, series, task, cfg.simulation)
    start = task.trial_start(hp.mean_delay_ns, 0)
    prediction, truth = free_run(spec, readout, series, start, task, n_cycles, cfg.simulation)
    n_warm = len(truth) - n_cycles
    truth = truth.slice(n_warm, n_cycles)

    free_spectrum = power_spectrum(prediction)
    true_spectrum = power_spectrum(truth)
    offset, relative = peak_offset(free_spectrum, true_spectrum)

    embed = snap_embed_delay(cfg.spectrum.embed_delay_mg, truth.dt)
    if not math.isclose(embed, cfg.spectrum.embed_delay_mg):
        logger.warning("Embedding delay %g MG units snapped to %g on the %g-unit sample grid",
                       cfg.spectrum.embed_delay_mg, embed, truth.dt)
    free_points = delay_embed(prediction, embed)
    true_points = delay_embed(truth, embed)
    contained = contained_in_box(free_points, bounding_box(true_points, cfg.spectrum.bounding_box_inflation))

    ctx.write_text("spectrum_free_run.csv", spectrum_csv(free_spectrum, ctx.header))
    ctx.write_text("spectrum_truth.csv", spectrum_csv(true_spectrum, ctx.header))
    ctx.write_text("embedding_free_run.csv", embedding_csv(free_points, ctx.header + [f"embed_delay={embed!r}"]))
    ctx.write_text("embedding_truth.csv", embedding_csv(true_points, ctx.header + [f"embed_delay={embed!r}"]))
    summary = {
        "peak_free_run": free_spectrum.peak_freq,
        "peak_truth": true_spectrum.peak_freq,
        "peak_offset": offset,
        "relative_offset": relative,
        "embed_delay_mg": embed,
        "contained": contained,
    }
    ctx.write_table("spectrum_summary.csv", list(summary), [list(summary.values())])
    logger.info("Spectral peak offset %.3g (%.1f%%), attractor contained: %s",
                offset, 100 * relative, contained)
    if cfg.plots:
        from .analysis.plotting import plot_embedding, plot_spectra

        plot_spectra(free_spectrum, true_spectrum, ctx.path("spectra.svg"), provenance=ctx.provenance)
        plot_embedding(free_points, true_points, ctx.path("embedding.svg"), provenance=ctx.provenance)
    return summary


def cmd_emit_hdl(ctx: RunContext, hardware_example: bool = False, spec_path: Optional[str] = None,
                 readout_path: Optional[str] = None) -> List[Path]:
    cfg = ctx.cfg
    if hardware_example:
        spec = hardware_example_spec()
    elif spec_path:
        spec = ReservoirSpec.from_json(Path(spec_path).read_text(encoding="utf-8"))
    else:
        spec = build_reservoir(cfg.hyperparams)
    readout = None
    if readout_path:
        readout = TrainedReadout.from_json(Path(readout_path).read_text(encoding="utf-8"))
    bundle = emit(spec, spec.input_bits, readout, provenance=ctx.provenance)
    return write_bundle(bundle, ctx.out_dir)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="Experiment config JSON file")
    common.add_argument("--seed", type=int, help="Base seed (also the reservoir seed)")
    common.add_argument("--out-dir", help="Output directory")
    common.add_argument("--engine", choices=("fixed", "event"), help="Glass-model engine")
    common.add_argument("--paper-scale", "--full-scale", dest="full_scale", action="store_true",
                        default=None, help="Use the full repetition counts (100 decay runs, 5x5 per point)")
    common.add_argument("--plots", action="store_true", default=None, help="Also write SVG plots")
    common.add_argument("--max-workers", type=int, help="Worker processes for independent runs")
    common.add_argument("--log-level", choices=("DEBUG", "INFO", "WARNING", "ERROR"),
                        help="Log verbosity (default: BRLAB_LOG_LEVEL or INFO)")

    parser = argparse.ArgumentParser(
        prog="boolean-reservoir",
        description="Time-delay Boolean network reservoir computing lab",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("generate", parents=[common], help="Write Mackey-Glass data files")
    train = sub.add_parser("train-predict", parents=[common], help="Train and score closed-loop prediction")
    train.add_argument("--export-design", action="store_true", help="Also write the design matrices")
    sub.add_parser("decay", parents=[common], help="Measure fading-memory decay times")
    sweep = sub.add_parser("sweep", parents=[common], help="Run hyperparameter sweeps")
    sweep.add_argument("--axis", action="append", choices=[a.value for a in SweepAxis],
                       help="Only sweep this axis (repeatable)")
    sub.add_parser("spectrum", parents=[common], help="Compare free-run spectra and attractors")
    hdl = sub.add_parser("emit-hdl", parents=[common], help="Emit the Verilog bundle")
    hdl.add_argument("--hardware-example", action="store_true", help="Emit the three-node example network")
    hdl.add_argument("--spec", help="Emit a saved reservoir spec JSON")
    hdl.add_argument("--readout", help="Trained readout JSON providing W_out")
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, object]:
    return {
        "seed": args.seed,
        "output_dir": args.out_dir,
        "simulation.engine": args.engine,
        "full_scale": args.full_scale,
        "plots": args.plots,
    }


def run(args: argparse.Namespace) -> None:
    with stage("config"):
        cfg = load_experiment_config(args.config, _overrides(args))
        if args.max_workers is not None and args.max_workers < 1:
            raise ConfigurationError("--max-workers must be at least 1")
        ctx = RunContext(cfg, args.command, args.max_workers)
    logger.info("Config %s, seed %d, output %s", ctx.hash, cfg.seed, ctx.out_dir)

    command = args.command
    if command == "generate":
        with stage("generate"):
            cmd_generate(ctx)
    elif command == "train-predict":
        with stage("train"):
            cmd_train_predict(ctx, export_design=args.export_design)
    elif command == "decay":
        with stage("decay"):
            cmd_decay(ctx)
    elif command == "sweep":
        with stage("sweep"):
            cmd_sweep(ctx, args.axis)
    elif command == "spectrum":
        with stage("spectrum"):
            cmd_spectrum(ctx)
    elif command == "emit-hdl":
        with stage("emit-hdl"):
            cmd_emit_hdl(ctx, args.hardware_example, args.spec, args.readout)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)
    try:
        run(args)
    except ReservoirLabError as e:
        logger.error("%s", e)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
