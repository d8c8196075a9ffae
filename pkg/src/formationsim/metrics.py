"""Metrics computed from a simulation trace."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .scenario import SimTrace


@dataclass
class UavMetrics:
    mean_error: float
    max_error: float
    min_error: float
    mean_error_final: float     # over the final 25% of the run
    max_error_final: float
    min_error_final: float
    estimator_error: float      # mean ||d_hat - d_true|| [m/s^2]
    control_effort: float       # integral of ft^2 + ||tau||^2 dt
    diverged: bool


@dataclass
class MetricsReport:
    per_uav: list[UavMetrics]
    aggregate: UavMetrics       # unweighted mean across followers


def _uav_metrics(trace: SimTrace, uav: int) -> UavMetrics:
    err = np.linalg.norm(trace.columns(uav, ("ex", "ey", "ez")), axis=1)
    if err.size == 0:
        raise InvalidInputError("cannot compute metrics on an empty trace")
    tail = err[int(np.floor(0.75 * err.size)):]
    est_err = np.linalg.norm(
        trace.columns(uav, ("dhat_x", "dhat_y", "dhat_z"))
        - trace.columns(uav, ("dtrue_x", "dtrue_y", "dtrue_z")), axis=1)
    ft = trace.column(uav, "ft")
    tau = trace.columns(uav, ("tau_phi", "tau_theta", "tau_psi"))
    effort = float(np.sum(ft ** 2 + np.sum(tau ** 2, axis=1)) * trace.dt)
    return UavMetrics(
        mean_error=float(np.mean(err)),
        max_error=float(np.max(err)),
        min_error=float(np.min(err)),
        mean_error_final=float(np.mean(tail)),
        max_error_final=float(np.max(tail)),
        min_error_final=float(np.min(tail)),
        estimator_error=float(np.mean(est_err)),
        control_effort=effort,
        diverged=trace.diverged,
    )


def compute_metrics(trace: SimTrace) -> MetricsReport:
    """Per-UAV and formation-aggregate tracking/estimation metrics."""
    if trace.n_uavs == 0 or all(d.shape[0] == 0 for d in trace.uav_data):
        raise InvalidInputError("cannot compute metrics on an empty trace")
    per_uav = [_uav_metrics(trace, i) for i in range(trace.n_uavs)]
    fields = ("mean_error", "max_error", "min_error", "mean_error_final",
              "max_error_final", "min_error_final", "estimator_error",
              "control_effort")
    agg = UavMetrics(
        **{f: float(np.mean([getattr(m, f) for m in per_uav])) for f in fields},
        diverged=any(m.diverged for m in per_uav),
    )
    return MetricsReport(per_uav=per_uav, aggregate=agg)
