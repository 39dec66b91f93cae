"""SVG figures for metric reports, change statistics and sweeps."""

import logging
from pathlib import Path
from typing import List, Sequence, Union

import matplotlib

matplotlib.use("Agg")  # Non-interactive backend, files only
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

from type_definitions.agent_types import SweepRow  # noqa: E402
from type_definitions.analysis_types import ChangeReport, MetricReport  # noqa: E402

logger = logging.getLogger("BoundedRational.Plotting")

# Fixed ids and no timestamp keep the SVG bytes reproducible.
plt.rcParams["svg.hashsalt"] = "bounded-rational"
SVG_METADATA = {"Date": None}

PathLike = Union[str, Path]


def _save(fig: "plt.Figure", path: PathLike) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(target, format="svg", metadata=SVG_METADATA)
    plt.close(fig)
    logger.info(f"Figure written to {target}")
    return target


def plot_metric_grid(report: MetricReport, path: PathLike) -> Path:
    """Priors as rows, metrics as columns, value against round."""
    frame = report.to_frame()
    priors = list(pd.unique(frame["prior"]))
    metrics = [m for m in pd.unique(frame["metric"]) if m != "kl"]
    fig, axes = plt.subplots(
        len(priors), len(metrics), figsize=(4 * len(metrics), 3 * len(priors)), squeeze=False
    )
    for r, prior in enumerate(priors):
        for c, metric in enumerate(metrics):
            ax = axes[r][c]
            cell = frame[(frame["prior"] == prior) & (frame["metric"] == metric)]
            values = cell["value"].to_numpy(dtype=np.float64)
            finite = np.where(np.isfinite(values), values, np.nan)
            ax.plot(cell["round"], finite, marker="o", markersize=3, color="#3498db")
            if not np.all(np.isfinite(values)):
                ax.text(0.02, 0.92, "inf rounds omitted", transform=ax.transAxes, fontsize=7)
            ax.set_title(f"{metric} | {prior}", fontsize=9)
            ax.set_xlabel("Round")
    return _save(fig, path)


def plot_change_histograms(report: ChangeReport, path: PathLike) -> Path:
    fig, axes = plt.subplots(1, 2, figsize=(12, 4))
    axes[0].bar(report.delta_counts.index, report.delta_counts.to_numpy(), color="#2ecc71")
    axes[0].set_title("Change in contributions")
    axes[0].set_xlabel("c_t - c_(t-1)")
    axes[1].bar(report.abs_counts.index, report.abs_counts.to_numpy(), color="#e67e22")
    axes[1].axvline(report.threshold - 0.5, color="gray", linestyle="--", alpha=0.6)
    axes[1].set_title(f"Absolute change (sticky share {report.stickiness:.3f})")
    axes[1].set_xlabel("|c_t - c_(t-1)|")
    return _save(fig, path)


def plot_pairwise_heatmap(report: ChangeReport, path: PathLike) -> Path:
    fig, ax = plt.subplots(figsize=(6, 5))
    image = ax.imshow(np.log1p(report.pairwise), origin="lower", cmap="viridis")
    fig.colorbar(image, ax=ax, label="log(1 + count)")
    ax.set_xlabel("Current contribution")
    ax.set_ylabel("Previous contribution")
    ax.set_title("Pairwise changes")
    return _save(fig, path)


def plot_phase_diagram(report: ChangeReport, path: PathLike) -> Path:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(report.phase["previous"], report.phase["mean_change"], color="#9b59b6")
    ax.axhline(0.0, color="gray", linewidth=0.8)
    ax.set_xlabel("Previous contribution")
    ax.set_ylabel("Mean change")
    ax.set_title("Phase diagram")
    return _save(fig, path)


def plot_policy_evolution(evolution: pd.DataFrame, path: PathLike) -> Path:
    """rounds x actions heatmap of historical policies."""
    fig, ax = plt.subplots(figsize=(8, 4))
    image = ax.imshow(
        evolution.to_numpy().T, origin="lower", aspect="auto", cmap="magma",
        extent=(evolution.index.min() - 0.5, evolution.index.max() + 0.5,
                -0.5, evolution.shape[1] - 0.5),
    )
    fig.colorbar(image, ax=ax, label="probability")
    ax.set_xlabel("Round")
    ax.set_ylabel("Contribution")
    ax.set_title("Average policy evolution")
    return _save(fig, path)


def plot_contribution_summary(summary: pd.DataFrame, path: PathLike) -> Path:
    """Mean and median contribution with the interquartile band; zero share below."""
    fig, (top, bottom) = plt.subplots(
        2, 1, figsize=(7, 5), sharex=True, gridspec_kw={"height_ratios": [3, 1]}
    )
    rounds = summary["round"].to_numpy()
    top.fill_between(
        rounds, summary["q25"].to_numpy(), summary["q75"].to_numpy(),
        color="#3498db", alpha=0.25, label="q25-q75",
    )
    top.plot(rounds, summary["mean"].to_numpy(), marker="o", markersize=3,
             color="#2c3e50", label="mean")
    top.plot(rounds, summary["median"].to_numpy(), linestyle="--", color="#e74c3c",
             label="median")
    top.set_ylabel("Contribution")
    top.legend(fontsize=7)
    bottom.bar(rounds, summary["zero_share"].to_numpy(), color="#95a5a6")
    bottom.set_ylim(0.0, 1.0)
    bottom.set_ylabel("Zero share")
    bottom.set_xlabel("Round")
    return _save(fig, path)


def plot_sweep(rows: Sequence[SweepRow], path: PathLike) -> Path:
    """Seed-averaged mean contribution against round, one line per lambda."""
    frame = pd.DataFrame(list(rows))
    fig, ax = plt.subplots(figsize=(7, 4))
    lambdas: List[float] = sorted(frame["lam"].unique())
    for lam in lambdas:
        curve = frame[frame["lam"] == lam].groupby("round")["mean_contribution"].mean()
        ax.plot(curve.index, curve.to_numpy(), marker="o", markersize=3, label=f"lambda={lam:g}")
    ax.set_xlabel("Round")
    ax.set_ylabel("Mean contribution")
    ax.legend(fontsize=7)
    return _save(fig, path)
