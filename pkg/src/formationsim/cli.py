"""Command-line interface.

Subcommands:
  simulate  run one scenario and export trace, metrics and plots
  metrics   recompute metrics from previously exported CSV traces
  compare   run one scenario under several controllers side by side
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .errors import ConfigError, DivergenceError, FormationSimError
from .export import export
from .metrics import compute_metrics
from .scenario import SimTrace, TRACE_COLUMNS, load_config, run_scenario

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGED = 3


def _load_trace_csvs(paths: list[str]) -> SimTrace:
    data = []
    for p in paths:
        try:
            raw = Path(p).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read trace {p}: {exc}") from exc
        lines = raw.strip().split("\n")
        header = tuple(lines[0].split(","))
        if header != TRACE_COLUMNS:
            raise ConfigError(f"trace {p} has an unexpected header")
        rows = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
        if rows.size == 0:
            rows = rows.reshape(0, len(TRACE_COLUMNS))
        data.append(rows)
    dts = [d[1, 0] - d[0, 0] for d in data if d.shape[0] >= 2]
    return SimTrace(dt=float(dts[0]) if dts else 0.01, uav_data=data)


def _print_report(report) -> None:
    header = f"{'uav':<10}{'mean_err':>10}{'max_err':>10}{'mean_f25':>10}{'est_err':>10}{'effort':>12}"
    print(header)
    rows = [(f"uav{i + 1}", m) for i, m in enumerate(report.per_uav)]
    rows.append(("formation", report.aggregate))
    for label, m in rows:
        print(f"{label:<10}{m.mean_error:>10.4f}{m.max_error:>10.4f}"
              f"{m.mean_error_final:>10.4f}{m.estimator_error:>10.4f}"
              f"{m.control_effort:>12.3f}")


def cmd_simulate(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    if args.controller:
        config = config.replace(controller=args.controller)
    if args.seed is not None:
        config = config.replace(seed=args.seed)
    outdir = args.out or config.output_dir
    trace = run_scenario(config)
    report = None
    if any(d.shape[0] for d in trace.uav_data):
        report = compute_metrics(trace)
    export(trace, report, outdir, plots=not args.no_plots)
    if not args.quiet:
        print(f"scenario {config.name!r}: {config.controller}, "
              f"{config.duration} s at dt={config.dt}, output in {outdir}")
        if report is not None:
            _print_report(report)
    if trace.diverged:
        print(f"error: simulation diverged at t={trace.divergence_time:.3f} s "
              f"(partial trace exported)", file=sys.stderr)
        return EXIT_DIVERGED
    return EXIT_OK


def cmd_metrics(args: argparse.Namespace) -> int:
    trace = _load_trace_csvs(args.trace)
    report = compute_metrics(trace)
    _print_report(report)
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    controllers = [c.strip() for c in args.controllers.split(",") if c.strip()]
    if not controllers:
        raise ConfigError("no controllers given")
    results = {}
    for token in controllers:
        trace = run_scenario(config.replace(controller=token))
        results[token] = (compute_metrics(trace), trace.diverged)
    header = f"{'controller':<12}{'mean_err':>10}{'max_err':>10}{'mean_f25':>10}{'effort':>12}{'diverged':>10}"
    print(header)
    for token, (report, diverged) in results.items():
        m = report.aggregate
        print(f"{token:<12}{m.mean_error:>10.4f}{m.max_error:>10.4f}"
              f"{m.mean_error_final:>10.4f}{m.control_effort:>12.3f}"
              f"{str(diverged):>10}")
    if any(d for _, d in results.values()):
        return EXIT_DIVERGED
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="formationsim",
        description="Quadrotor formation-flight simulator with disturbance estimation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a scenario")
    p_sim.add_argument("--config", required=True, help="scenario YAML file")
    p_sim.add_argument("--controller", choices=("rbf-bsmc", "bsmc", "smc"),
                       help="override the configured controller")
    p_sim.add_argument("--seed", type=int, help="override the configured seed")
    p_sim.add_argument("--out", help="override the configured output directory")
    p_sim.add_argument("--quiet", action="store_true", help="suppress the summary")
    p_sim.add_argument("--no-plots", action="store_true", help="skip SVG plots")
    p_sim.set_defaults(func=cmd_simulate)

    p_met = sub.add_parser("metrics", help="metrics from exported CSV traces")
    p_met.add_argument("--trace", nargs="+", required=True, help="per-UAV CSV files")
    p_met.set_defaults(func=cmd_metrics)

    p_cmp = sub.add_parser("compare", help="run several controllers on one scenario")
    p_cmp.add_argument("--config", required=True, help="scenario YAML file")
    p_cmp.add_argument("--controllers", required=True,
                       help="comma-separated controller tokens")
    p_cmp.set_defaults(func=cmd_compare)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except FormationSimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
