"""Command-line driver.

Subcommands:
  simulate  evolve a wavepacket and write series.csv + summary.json
  oracle    emit the analytic-field series for the same schema
  sweep     classical-limit sweep, writes sweep.csv + sweep_summary.json
  binning   bin-width convergence study, writes binning.csv

Exit codes: 0 all configured checks pass, 1 usage/config error, 2 tolerance
failure.  Outputs are byte-identical across reruns of the same config.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .climit import run_sweep
from .config import (
    ConfigError,
    parse_binning_config,
    parse_config,
    parse_sweep_config,
)
from .entropy import binning_limit_study
from .grid import RealField
from .report import (
    run_oracle,
    run_simulation,
    write_binning_csv,
    write_series_csv,
    write_snapshots,
    write_summary_json,
    write_sweep_csv,
)


def _read_config(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")


def _cmd_run(args, analytic: bool) -> int:
    cfg = parse_config(_read_config(args.config))
    report = run_oracle(cfg) if analytic else run_simulation(cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_series_csv(report.rows, out / "series.csv")
    write_summary_json(report.summary, out / "summary.json")
    if cfg.save_snapshots:
        write_snapshots(report.snapshots, out / "snapshots")
    if not args.quiet:
        print(
            f"{'oracle' if analytic else 'simulate'}: {len(report.rows)} rows, "
            f"I = {report.summary['I_final']:.6g}, "
            f"delta_I = {report.summary['delta_I']:.6g}, "
            f"checks {'passed' if report.summary['passed'] else 'FAILED'}"
        )
    return 0 if report.summary["passed"] else 2


def _cmd_sweep(args) -> int:
    spec = parse_sweep_config(_read_config(args.config))
    report = run_sweep(spec)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_sweep_csv(report, out / "sweep.csv")
    summary = {
        "exponent": report.exponent,
        "n_rows": len(report.rows),
        "n_failed": sum(1 for r in report.rows if r.error),
    }
    (out / "sweep_summary.json").write_text(
        json.dumps(summary, sort_keys=True, indent=2) + "\n"
    )
    if not args.quiet:
        print(
            f"sweep: {len(report.rows)} rows, fitted exponent = {report.exponent:.4g}"
        )
    return 2 if summary["n_failed"] else 0


def _cmd_binning(args) -> int:
    cfg = parse_binning_config(_read_config(args.config))
    x = cfg.grid.x
    rho = np.exp(-((x - cfg.x0) ** 2) / (2.0 * cfg.sigma0**2)) / np.sqrt(
        2.0 * np.pi * cfg.sigma0**2
    )
    rows = binning_limit_study(
        RealField(cfg.grid, rho), cfg.bin_widths, cfg.reg_floor
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_binning_csv(rows, out / "binning.csv")
    if not args.quiet:
        for r in rows:
            print(
                f"binning: dq = {r.bin_width:g}, defect = {r.defect:.3e}, "
                f"{'resolved' if r.resolved else 'unresolved'}"
            )
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="entroflux",
        description="1-D wavepacket simulator with entropy balance diagnostics",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("simulate", "oracle", "sweep", "binning"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="path to key = value config")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--quiet", action="store_true")
    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            return _cmd_run(args, analytic=False)
        if args.command == "oracle":
            return _cmd_run(args, analytic=True)
        if args.command == "sweep":
            return _cmd_sweep(args)
        return _cmd_binning(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
