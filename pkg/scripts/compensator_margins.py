#!/usr/bin/env python3
"""Print loop-gain and stability margins for the canonical pulse-advance stage.

Usage: python scripts/compensator_margins.py
"""

from ngdsim.blocks import (
    gain_feedback_check,
    pulse_advance_stage_spec,
    stability_probe,
)
from ngdsim.lti import FrequencyGrid, Series, evaluate_grid
from ngdsim.blocks import make_ngd_compensator, PULSE_ADVANCE_STAGES


def main() -> int:
    spec = pulse_advance_stage_spec()
    stability = stability_probe(spec)
    print("single stage Nyquist probe:")
    print(f"  stable            : {stability.stable}")
    print(f"  min |1 + FG|      : {stability.min_distance_to_minus_one:.4f}")
    print(f"  winding number    : {stability.winding_number}")
    print(f"  phase margin      : {stability.phase_margin_deg:.2f} deg")

    band = FrequencyGrid(omega_min=1.0, omega_max=500.0, count=512, spacing="logarithmic")
    loop = gain_feedback_check(spec, band, threshold=10.0)
    print("loop gain over the pulse band (1..500 rad/s):")
    print(f"  min |FG|          : {loop.min_loop_gain:.2f} at {loop.worst_omega:.1f} rad/s")

    stage = make_ngd_compensator(spec, check_stability=False)
    cascade = Series(blocks=(stage,) * PULSE_ADVANCE_STAGES)
    spectrum = evaluate_grid(cascade, band)
    print("three-stage cascade at low frequency:")
    print(f"  |T|(min band edge): {spectrum.magnitude[0]:.4f}")
    print(f"  group delay at DC : {spectrum.group_delay[0] * 1e3:.2f} ms (negative = advance)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
