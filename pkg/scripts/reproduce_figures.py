#!/usr/bin/env python3
"""Run the three headline experiments and write CSV/SVG/summary artifacts.

Usage: python scripts/reproduce_figures.py [out_dir]
"""

import sys
from pathlib import Path

from ngdsim.scenarios import builtin_config, run_scenario

SCENARIOS = ["fig2_rlc_advance", "fig3_causality", "fig5_rc_cancellation"]


def main() -> int:
    out_root = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("results")
    failures = 0
    for name in SCENARIOS:
        summary = run_scenario(builtin_config(name), out_dir=out_root / name)
        status = "PASS" if summary.passed else "FAIL"
        print(f"{name}: {status} ({summary.duration_s:.2f} s)")
        for check in summary.checks:
            mark = "ok " if check.passed else "FAIL"
            print(f"  [{mark}] {check.metric} = {check.value}  (expected {check.constraint})")
        failures += not summary.passed
    print(f"artifacts under {out_root}/")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
