#!/usr/bin/env python3
"""Sweep the amplifier gain in the golden-rule scenario over three decades.

The max residual of the equal-input-voltages approximation should fall as
1/gain.  Usage: python scripts/gain_sweep.py [out_dir]
"""

import sys
from pathlib import Path

from ngdsim.scenarios import builtin_config, sweep


def main() -> int:
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("results/gain_sweep")
    rows = sweep(
        builtin_config("golden_rule_sweep"),
        "blocks.amp.value",
        [1e2, 1e3, 1e4],
        out_dir=out_dir,
    )
    print(f"{'gain':>10}  {'max residual':>14}  {'inversion error':>16}")
    for row in rows:
        print(
            f"{row['value']:>10g}  {row['golden.max_residual']:>14.6g}  "
            f"{row['inversion.max_error']:>16.6g}"
        )
    print(f"table written to {out_dir / 'sweep.csv'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
