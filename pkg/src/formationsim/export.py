"""Trace and metrics persistence: CSV files, a metrics summary, SVG plots.

CSV files carry a fixed header, full double-precision decimal values,
UTF-8 encoding and LF line endings so identical runs export byte-identical
files.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .errors import FormationSimError
from .metrics import MetricsReport, UavMetrics
from .scenario import SimTrace, TRACE_COLUMNS


def write_csv(trace: SimTrace, uav: int, path: Path) -> None:
    header = ",".join(TRACE_COLUMNS)
    lines = [header]
    for row in trace.uav_data[uav]:
        lines.append(",".join(repr(float(v)) for v in row))
    try:
        path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    except OSError as exc:
        raise FormationSimError(f"cannot write trace to {path}: {exc}") from exc


def _format_metrics(m: UavMetrics, label: str) -> list[str]:
    return [
        f"[{label}]",
        f"mean_error          = {m.mean_error:.6f} m",
        f"max_error           = {m.max_error:.6f} m",
        f"min_error           = {m.min_error:.6f} m",
        f"mean_error_final25  = {m.mean_error_final:.6f} m",
        f"max_error_final25   = {m.max_error_final:.6f} m",
        f"min_error_final25   = {m.min_error_final:.6f} m",
        f"estimator_error     = {m.estimator_error:.6f} m/s^2",
        f"control_effort      = {m.control_effort:.6f}",
        f"diverged            = {m.diverged}",
        "",
    ]


def write_metrics(report: MetricsReport, path: Path) -> None:
    lines: list[str] = []
    for i, m in enumerate(report.per_uav, start=1):
        lines += _format_metrics(m, f"uav{i}")
    lines += _format_metrics(report.aggregate, "formation")
    try:
        path.write_text("\n".join(lines), encoding="utf-8", newline="\n")
    except OSError as exc:
        raise FormationSimError(f"cannot write metrics to {path}: {exc}") from exc


def plot_trajectories(trace: SimTrace, path: Path) -> None:
    """Three orthographic projections (xy, xz, yz) of all UAV paths and
    their references."""
    views = (("x", "y"), ("x", "z"), ("y", "z"))
    fig, axes = plt.subplots(1, 3, figsize=(15, 5))
    for ax, (a, b) in zip(axes, views):
        for i in range(trace.n_uavs):
            ax.plot(trace.column(i, a), trace.column(i, b), label=f"uav{i + 1}")
            ax.plot(trace.column(i, f"ref_{a}"), trace.column(i, f"ref_{b}"),
                    "--", linewidth=0.8)
        ax.set_xlabel(f"{a} [m]")
        ax.set_ylabel(f"{b} [m]")
        ax.set_title(f"{a}{b} view")
        ax.grid(True, alpha=0.3)
    if trace.n_uavs:
        axes[0].legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_tracking_error(trace: SimTrace, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(8, 4))
    for i in range(trace.n_uavs):
        err = np.linalg.norm(trace.columns(i, ("ex", "ey", "ez")), axis=1)
        ax.plot(trace.column(i, "t"), err, label=f"uav{i + 1}")
    ax.set_xlabel("t [s]")
    ax.set_ylabel("tracking error norm [m]")
    ax.grid(True, alpha=0.3)
    if trace.n_uavs:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_disturbance(trace: SimTrace, path: Path) -> None:
    """Estimated vs true per-unit-mass disturbance, one row per UAV."""
    n = max(trace.n_uavs, 1)
    fig, axes = plt.subplots(n, 1, figsize=(8, 3 * n), squeeze=False)
    for i in range(trace.n_uavs):
        ax = axes[i][0]
        t = trace.column(i, "t")
        for axis in ("x", "y", "z"):
            ax.plot(t, trace.column(i, f"dhat_{axis}"), label=f"est {axis}")
            ax.plot(t, trace.column(i, f"dtrue_{axis}"), "--", linewidth=0.8,
                    label=f"true {axis}")
        ax.set_xlabel("t [s]")
        ax.set_ylabel(f"uav{i + 1} dist. [m/s^2]")
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize=7, ncol=3)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def export(trace: SimTrace, report: MetricsReport | None, outdir: str | Path,
           plots: bool = True) -> list[Path]:
    """Write per-UAV CSVs, the metrics summary and plots into ``outdir``.
    Returns the written paths."""
    outdir = Path(outdir)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise FormationSimError(f"cannot create output directory {outdir}: {exc}") from exc
    written = []
    for i in range(trace.n_uavs):
        p = outdir / f"uav{i + 1}.csv"
        write_csv(trace, i, p)
        written.append(p)
    if report is not None:
        p = outdir / "metrics.txt"
        write_metrics(report, p)
        written.append(p)
    if plots and any(d.shape[0] for d in trace.uav_data):
        for fn, name in ((plot_trajectories, "trajectories.svg"),
                         (plot_tracking_error, "tracking_error.svg"),
                         (plot_disturbance, "disturbance.svg")):
            p = outdir / name
            fn(trace, p)
            written.append(p)
    return written
