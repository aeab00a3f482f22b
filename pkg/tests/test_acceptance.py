"""Acceptance suite: the nine headline requirements, one test (or class) each.

Numeric targets come from independent closed-form oracles where they exist;
simulation-level targets (pulse advance, rise-time ratio) are checked
against the stated tolerances via the built-in scenarios.
"""

import numpy as np
import pytest

from ngdsim.analysis import (
    causality_front_test,
    delay_cancellation_report,
    golden_rule_residual,
    inversion_error,
)
from ngdsim.blocks import (
    CompensatorSpec,
    OpAmpModel,
    make_ngd_compensator,
    opamp_block,
    pulse_advance_compensator,
    rc_lowpass_block,
    rlc_bandpass_block,
    rlc_lowpass_block,
)
from ngdsim.lti import (
    FeedbackLoop,
    FrequencyGrid,
    Gain,
    Identity,
    PureDelay,
    Rational,
    Series,
    evaluate_grid,
    impulse_response,
)
from ngdsim.propagation import apply_filter, load_power
from ngdsim.signals import GaussianPulseSpec, gaussian_pulse


class TestCriterion1PulseAdvance:
    """25 ms-FWHM Gaussian through the canonical compensator: peak advanced
    by 12.1 ms +/- 5% with RMS distortion <= 0.05, in under 5 s."""

    def test_peak_advance_and_distortion(self, builtins):
        metrics = builtins.results["fig2_rlc_advance"].metrics
        assert metrics["delay.peak_advance"] == pytest.approx(12.1e-3, rel=0.05)
        assert metrics["delay.distortion_rms"] <= 0.05

    def test_runtime_under_five_seconds(self, builtins):
        assert builtins.results["fig2_rlc_advance"].duration_s < 5.0


class TestCriterion2FrontCausality:
    """Truncated-at-peak input: the front is not advanced (<= 1 sample), the
    pre-cut output matches the full-pulse output, yet the full pulse keeps
    > 0.8x of its criterion-1 peak advance."""

    def test_front_not_advanced(self, builtins):
        metrics = builtins.results["fig3_causality"].metrics
        dt = 2e-6  # causality_front step grid in the built-in scenario
        assert metrics["front.front_advance"] is not None
        assert abs(metrics["front.front_advance"]) <= dt * (1 + 1e-9)

    def test_pre_cut_output_unchanged(self, builtins):
        metrics = builtins.results["fig3_causality"].metrics
        assert metrics["front.pre_cut_match_rms"] <= 0.01

    def test_peak_advance_retained(self, builtins):
        fig2 = builtins.results["fig2_rlc_advance"].metrics["delay.peak_advance"]
        fig3 = builtins.results["fig3_causality"].metrics["delay.peak_advance"]
        assert fig3 > 0.8 * fig2


class TestCriterion3RiseTimeCancellation:
    """Square-wave edge through a bare RC versus the compensated link."""

    RC = 1.0e-3

    def test_uncompensated_rise_is_2_197_rc(self, builtins):
        # oracle: 10-90 rise of a first-order step response is RC * ln 9
        rise = builtins.results["fig5_rc_cancellation"].metrics[
            "rise_uncompensated.rise_time"
        ]
        assert rise == pytest.approx(self.RC * np.log(9.0), rel=0.05)

    def test_compensated_rise_at_least_5x_faster(self, builtins):
        metrics = builtins.results["fig5_rc_cancellation"].metrics
        assert metrics["rise_compensated.rise_time"] <= 0.2 * self.RC * np.log(9.0)

    def test_settles_within_ten_percent_bands(self, builtins):
        metrics = builtins.results["fig5_rc_cancellation"].metrics
        assert metrics["settle_high.settled"] is True
        assert metrics["settle_low.settled"] is True
        assert metrics["settle_high.max_deviation_fraction"] <= 0.1
        assert metrics["settle_low.max_deviation_fraction"] <= 0.1


class TestCriterion4ClosedLoopExactness:
    """FeedbackLoop evaluation equals G/(1+FG) to 1e-12 relative over 1000
    randomized (G, F, omega) triples, with the oracle evaluated by an
    independent polynomial routine (np.polyval, high-to-low coefficients)."""

    def test_randomized_triples(self):
        rng = np.random.default_rng(20260823)
        checked = 0
        while checked < 1000:
            num_g = rng.uniform(-5, 5, rng.integers(1, 4))
            den_g = np.concatenate([[1.0], rng.uniform(-2, 2, rng.integers(0, 3))])
            num_f = rng.uniform(-5, 5, rng.integers(1, 4))
            den_f = np.concatenate([[1.0], rng.uniform(-2, 2, rng.integers(0, 3))])
            omega = rng.uniform(0.01, 100.0)
            s = 1j * omega
            g = np.polyval(num_g[::-1], s) / np.polyval(den_g[::-1], s)
            f = np.polyval(num_f[::-1], s) / np.polyval(den_f[::-1], s)
            if abs(1.0 + f * g) < 1e-6:
                continue  # skip near-singular draws
            expected = g / (1.0 + f * g)
            loop = FeedbackLoop(
                forward=Rational(num=tuple(num_g), den=tuple(den_g)),
                feedback=Rational(num=tuple(num_f), den=tuple(den_f)),
            )
            actual = complex(loop.response(omega))
            assert abs(actual - expected) <= 1e-12 * max(abs(expected), 1e-30)
            checked += 1


class TestCriterion5GainScaling:
    """Golden-rule residual and inversion error halve (+/- 10%) per gain
    doubling when min |FG| >= 10."""

    GRID = FrequencyGrid(0.0, 1000.0, 512)
    FEEDBACK = rc_lowpass_block(1000.0, 1e-6)
    GAINS = (100.0, 200.0, 400.0)

    def test_loop_gain_precondition(self):
        omegas = self.GRID.omegas()
        loop = np.abs(self.FEEDBACK.response(omegas)) * self.GAINS[0]
        assert np.min(loop) >= 10.0

    def test_residual_halves_per_doubling(self):
        residuals = [
            golden_rule_residual(Gain(value=g), self.FEEDBACK, self.GRID).max_residual
            for g in self.GAINS
        ]
        for smaller, larger in zip(residuals[1:], residuals[:-1]):
            assert smaller / larger == pytest.approx(0.5, rel=0.1)

    def test_inversion_error_halves_per_doubling(self):
        errors = [
            inversion_error(Gain(value=g), self.FEEDBACK, self.GRID) for g in self.GAINS
        ]
        for smaller, larger in zip(errors[1:], errors[:-1]):
            assert smaller / larger == pytest.approx(0.5, rel=0.1)


class TestCriterion6GroupDelayClosedForms:
    """Numeric group delay vs closed forms on 4096-point grids, and the
    matched cascade's residual delay bound."""

    def test_rc_group_delay_closed_form(self):
        rc = 1e-3
        grid = FrequencyGrid(0.0, 4.0 / rc, 4096)
        analysis = evaluate_grid(rc_lowpass_block(1000.0, 1e-6), grid)
        omegas = grid.omegas()[1:-1]
        expected = rc / (1.0 + (omegas * rc) ** 2)
        rel = np.abs(analysis.group_delay[1:-1] - expected) / expected
        assert np.max(rel) <= 1e-3

    def test_rlc_group_delay_at_resonance(self):
        r, ell, c = 100.0, 0.1, 1e-6
        omega0 = 1.0 / np.sqrt(ell * c)
        # 4097 points put omega0 exactly on the middle grid point
        grid = FrequencyGrid(0.0, 2.0 * omega0, 4097)
        analysis = evaluate_grid(rlc_bandpass_block(r, ell, c), grid)
        measured = analysis.group_delay[2048]
        assert grid.omegas()[2048] == pytest.approx(omega0, rel=1e-12)
        assert measured == pytest.approx(2.0 * ell / r, rel=1e-3)

    def test_matched_cascade_delay_bound(self):
        rc = 1e-3
        passive = rc_lowpass_block(1000.0, 1e-6)
        # gain-bandwidth exactly at the required 1e3/RC
        amp = OpAmpModel(dc_gain=1000.0, pole_frequency=1.0e6 / 1000.0)
        assert amp.gain_bandwidth >= 1e3 / rc
        comp = make_ngd_compensator(CompensatorSpec(feedback_element=passive, amplifier=amp))
        grid = FrequencyGrid(0.0, 1.0 / (2.0 * rc), 4096)
        report = delay_cancellation_report(passive, comp, grid)
        assert np.max(np.abs(report.tau_total)) <= 0.02 * rc


class TestCriterion7BodeConsistency:
    """Minimum-phase reconstruction within 0.02 rad for RC and RLC blocks;
    a pure delay (all-pass) reconstructs to zero phase."""

    def test_rc_and_rlc_within_tolerance(self, builtins):
        metrics = builtins.results["bode_check"].metrics
        assert metrics["rc_bode.max_band_error"] <= 0.02
        assert metrics["rlc_bode.max_band_error"] <= 0.02

    def test_all_pass_exclusion(self, builtins):
        metrics = builtins.results["bode_check"].metrics
        assert metrics["delay_bode.max_reconstructed_abs"] <= 1e-9


def _corpus(rng):
    """Randomized stable causal composites, parameterized so a 1 us grid
    resolves every pole and a 131 ms window covers every decay.

    Every first-order section is band-limited by a fast parasitic output
    pole (30 us, still 30 grid samples wide).  Sampling the spectrum of a
    system whose magnitude decays only as 1/omega leaks ~1e-5 of its
    impulse energy into negative time (Dirichlet-kernel truncation at
    Nyquist), so bare first-order sections cannot meet the 1e-6 bound at
    any practical grid; the parasitic pole makes the roll-off second order,
    which is what a physical measurement chain does anyway.
    """
    parasitic = rc_lowpass_block(100.0, 3e-7)  # RC = 30 us

    def band_limited(block):
        return Series(blocks=(block, parasitic))

    blocks = []
    for _ in range(6):
        tau = rng.uniform(1e-4, 3e-3)
        r = 10.0 ** rng.uniform(2, 4)
        blocks.append(band_limited(rc_lowpass_block(r, tau / r)))
    for _ in range(4):
        tau = rng.uniform(3e-4, 3e-3)
        r = 10.0 ** rng.uniform(2, 4)
        gamma = rng.uniform(0.2, 1.0)
        c = tau / r
        blocks.append(rlc_lowpass_block(r, gamma * tau**2 / c, c))
    for _ in range(3):
        tau = rng.uniform(3e-4, 3e-3)
        r = 10.0 ** rng.uniform(2, 4)
        gamma = rng.uniform(0.2, 1.0)
        c = tau / r
        blocks.append(band_limited(rlc_bandpass_block(r, gamma * tau**2 / c, c)))
    for _ in range(3):
        a0 = rng.uniform(10.0, 200.0)
        pole = rng.uniform(400.0, 1e5 / a0)
        blocks.append(band_limited(opamp_block(OpAmpModel(dc_gain=a0, pole_frequency=pole))))
    for _ in range(3):
        # grid-aligned delays: a fractional delay is causal in continuous
        # time but its band-limited sampling is not exactly so
        blocks.append(PureDelay(tau_d=int(rng.integers(0, 1000)) * 1e-6))
    for _ in range(4):
        # opamp with RC feedback: second-order loop, unconditionally stable
        tau = rng.uniform(1e-4, 3e-3)
        a0 = rng.uniform(10.0, 200.0)
        pole = rng.uniform(400.0, 1e5 / a0)
        loop = make_ngd_compensator(
            CompensatorSpec(
                feedback_element=rc_lowpass_block(1000.0, tau / 1000.0),
                amplifier=OpAmpModel(dc_gain=a0, pole_frequency=pole),
            ),
            check_stability=False,
        )
        blocks.append(band_limited(loop))
    for _ in range(3):
        pair = rng.choice(len(blocks), size=2, replace=False)
        blocks.append(Series(blocks=(blocks[pair[0]], blocks[pair[1]])))
    return blocks


class TestCriterion8CausalityCorpus:
    """Negative-time impulse energy <= 1e-6 of total, and no front advanced
    by more than one sample, across a randomized stable block corpus."""

    DT = 1e-6

    @pytest.fixture(scope="class")
    @staticmethod
    def corpus():
        return _corpus(np.random.default_rng(8123))

    def test_negative_time_energy(self, corpus):
        for i, block in enumerate(corpus):
            h = impulse_response(block, 131072, self.DT)
            total = float(np.sum(h.samples**2))
            negative = float(np.sum(h.samples[len(h) // 2 :] ** 2))
            assert negative <= 1e-6 * total, f"block {i}: {negative / total:.3e}"

    def test_fronts_never_advanced(self, corpus):
        pulse = GaussianPulseSpec(center=0.015, fwhm=0.004)
        for i, block in enumerate(corpus):
            report = causality_front_test(block, pulse, 0.0, self.DT, 65536)
            if report.front_advance is not None:
                assert report.front_advance <= self.DT * (1 + 1e-9), f"block {i}"
            assert report.pre_cut_match_rms <= 0.01, f"block {i}"


class TestCriterion9EnergyPeakCoincidence:
    """argmax of load power equals argmax of |output voltage| sample-exactly."""

    def test_scenario_report(self, builtins):
        metrics = builtins.results["energy_report"].metrics
        assert metrics["energy.indices_match"] is True
        assert metrics["energy.voltage_peak_index"] == metrics["energy.power_peak_index"]

    @pytest.mark.parametrize(
        "block",
        [Identity(), PureDelay(tau_d=3e-3), pulse_advance_compensator(check_stability=False)],
        ids=["identity", "delay", "compensator"],
    )
    def test_direct_outputs(self, block):
        sig = gaussian_pulse(GaussianPulseSpec(center=0.35, fwhm=0.025), 0.0, 5e-5, 16384)
        out = apply_filter(block, sig)
        report = load_power(out, 50.0)
        assert int(np.argmax(report.power.samples)) == int(np.argmax(np.abs(out.samples)))
