"""
Optional SVG renderings of the result tables.

SVG output uses a fixed hash salt and omits the date so reruns write
identical files. The config hash and seed of the run, when given, go
into the SVG title metadata.
"""

import logging
from pathlib import Path
from typing import Mapping, Optional, Sequence, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from ..models import SpectrumResult, SweepRow, TimeSeries  # noqa: E402

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

_SVG_METADATA = {"Date": None}


def provenance_title(provenance: Optional[Mapping[str, object]]) -> Optional[str]:
    if not provenance:
        return None
    return " ".join(f"{k}={v}" for k, v in provenance.items())


def _save(fig, path: PathLike, provenance: Optional[Mapping[str, object]] = None) -> Path:
    path = Path(path)
    metadata = dict(_SVG_METADATA)
    title = provenance_title(provenance)
    if title:
        metadata["Title"] = title
    path.parent.mkdir(parents=True, exist_ok=True)
    with plt.rc_context({"svg.hashsalt": "boolean-reservoir-lab", "svg.fonttype": "none"}):
        fig.savefig(path, format="svg", metadata=metadata)
    plt.close(fig)
    logger.debug("Wrote plot %s", path)
    return path


def plot_prediction(prediction: TimeSeries, truth: TimeSeries, path: PathLike,
                    title: Optional[str] = None, *,
                    provenance: Optional[Mapping[str, object]] = None) -> Path:
    fig, ax = plt.subplots(figsize=(8, 3))
    ax.plot(truth.times(), truth.values, color="0.4", label="Mackey-Glass")
    ax.plot(prediction.times(), prediction.values, color="tab:red", label="reservoir")
    ax.axvline(prediction.t0, color="k", linestyle=":", linewidth=0.8)
    ax.set_xlabel(f"t ({truth.units.value})")
    ax.set_ylabel("u")
    ax.legend(loc="upper right")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    return _save(fig, path, provenance)


def plot_sweep(rows: Sequence[SweepRow], path: PathLike, *,
              provenance: Optional[Mapping[str, object]] = None) -> Path:
    if not rows:
        raise ValueError("no sweep rows to plot")
    values = np.array([r.value for r in rows])
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(5, 6), sharex=True)
    top.errorbar(values, [r.nrmse_mean for r in rows], yerr=[r.nrmse_stderr for r in rows],
                 fmt="o-", capsize=3)
    top.plot(values, [r.nrmse_median for r in rows], "s--", color="0.5", label="median")
    top.set_ylabel("NRMSE")
    top.legend()
    bottom.errorbar(values, [r.lambda_mean for r in rows], yerr=[r.lambda_stderr for r in rows],
                    fmt="o-", capsize=3, color="tab:green")
    bottom.set_ylabel("decay time (ns)")
    bottom.set_xlabel(rows[0].axis.value)
    fig.tight_layout()
    return _save(fig, path, provenance)


def plot_decay(tau_values: Sequence[float], lambdas: Sequence[float], stderrs: Sequence[float],
               slope: float, intercept: float, path: PathLike, *,
               provenance: Optional[Mapping[str, object]] = None) -> Path:
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.errorbar(tau_values, lambdas, yerr=stderrs, fmt="o", capsize=3)
    grid = np.linspace(min(tau_values), max(tau_values), 50)
    ax.plot(grid, slope * grid + intercept, "--", color="tab:red", label=f"slope {slope:.2f}")
    ax.set_xlabel("mean link delay (ns)")
    ax.set_ylabel("decay time (ns)")
    ax.legend()
    fig.tight_layout()
    return _save(fig, path, provenance)


def plot_spectra(free_run: SpectrumResult, truth: SpectrumResult, path: PathLike, *,
                 provenance: Optional[Mapping[str, object]] = None) -> Path:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogy(truth.freqs, truth.power, color="0.4", label="Mackey-Glass")
    ax.semilogy(free_run.freqs, free_run.power, color="tab:red", label="reservoir")
    ax.set_xlabel(f"frequency ({truth.units})")
    ax.set_ylabel("normalized power")
    ax.legend()
    fig.tight_layout()
    return _save(fig, path, provenance)


def plot_embedding(free_run: np.ndarray, truth: np.ndarray, path: PathLike, *,
                   provenance: Optional[Mapping[str, object]] = None) -> Path:
    fig, axes = plt.subplots(1, 2, figsize=(8, 4), sharex=True, sharey=True)
    for ax, points, label in zip(axes, (truth, free_run), ("Mackey-Glass", "reservoir")):
        ax.plot(points[:, 1], points[:, 0], linewidth=0.4)
        ax.set_title(label)
        ax.set_xlabel("u(t - delay)")
    axes[0].set_ylabel("u(t)")
    fig.tight_layout()
    return _save(fig, path, provenance)
