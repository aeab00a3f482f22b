"""Command-line entry point: run scenarios, list built-ins, sweep parameters.

Exit codes: 0 all expectations pass, 1 expectation failure, 2 config or
simulation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import SimulationError
from .scenarios import builtin_config, list_scenarios, run_scenario, sweep


def _load_config(ref: str) -> dict:
    path = Path(ref)
    if path.exists():
        with path.open() as fh:
            return json.load(fh)
    return builtin_config(ref)


def _print_summary(summary) -> None:
    status = "PASS" if summary.passed else "FAIL"
    print(f"{summary.name}: {status} ({summary.duration_s:.2f} s)")
    for check in summary.checks:
        mark = "ok " if check.passed else "FAIL"
        value = f"{check.value:.6g}" if isinstance(check.value, float) else check.value
        print(f"  [{mark}] {check.metric} = {value}  (expected {check.constraint})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ngdsim",
        description="Simulate negative-group-delay op-amp circuits and pulse propagation.",
    )
    parser.add_argument(
        "--out-dir", default="ngdsim_out", help="directory for CSV/SVG/summary outputs"
    )
    parser.add_argument(
        "--tolerance-scale",
        type=float,
        default=1.0,
        help="multiply all expectation tolerances by this factor",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario (config path or built-in name)")
    p_run.add_argument("scenario", help="path to a JSON config, or a built-in name")

    sub.add_parser("list", help="list built-in scenarios")

    p_sweep = sub.add_parser("sweep", help="re-run a scenario over parameter values")
    p_sweep.add_argument("scenario", help="path to a JSON config, or a built-in name")
    p_sweep.add_argument("--param", required=True, help="dotted config path, e.g. blocks.amp.value")
    p_sweep.add_argument("--values", required=True, help="comma-separated numeric values")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list":
            for name, description in list_scenarios():
                print(f"{name}: {description}")
            return 0
        if args.command == "run":
            config = _load_config(args.scenario)
            out_dir = Path(args.out_dir) / config.get("name", "scenario")
            summary = run_scenario(
                config, out_dir=out_dir, tolerance_scale=args.tolerance_scale
            )
            _print_summary(summary)
            print(f"outputs written to {out_dir}")
            return 0 if summary.passed else 1
        if args.command == "sweep":
            config = _load_config(args.scenario)
            try:
                values = [float(v) for v in args.values.split(",") if v.strip()]
            except ValueError as exc:
                print(f"error: --values must be numeric: {exc}", file=sys.stderr)
                return 2
            out_dir = Path(args.out_dir) / f"{config.get('name', 'scenario')}_sweep"
            rows = sweep(
                config,
                args.param,
                values,
                out_dir=out_dir,
                tolerance_scale=args.tolerance_scale,
            )
            for row in rows:
                status = "PASS" if row["passed"] else "FAIL"
                print(f"{args.param} = {row['value']:g}: {status}")
            print(f"sweep table written to {out_dir / 'sweep.csv'}")
            return 0 if all(row["passed"] for row in rows) else 1
    except (SimulationError, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
