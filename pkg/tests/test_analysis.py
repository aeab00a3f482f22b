import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ngdsim.analysis import (
    bode_consistency_report,
    causality_front_test,
    delay_cancellation_report,
    golden_rule_residual,
    inversion_error,
    minimum_phase_reconstruction,
)
from ngdsim.blocks import (
    CompensatorSpec,
    OpAmpModel,
    make_ngd_compensator,
    rc_lowpass_block,
    rlc_bandpass_block,
)
from ngdsim.errors import GridTooNarrow, InvalidParameter, NonpositiveMagnitude
from ngdsim.lti import FrequencyGrid, Gain, Identity, PureDelay
from ngdsim.signals import GaussianPulseSpec


class TestGoldenRule:
    def test_constant_gain_exact(self):
        grid = FrequencyGrid(0.0, 100.0, 32)
        report = golden_rule_residual(Gain(value=99.0), Identity(), grid)
        # residual is exactly |1/(1+FG)| = 1/100 at every point
        np.testing.assert_allclose(report.residual, 0.01, rtol=1e-12)
        assert report.max_residual == pytest.approx(0.01, rel=1e-12)

    def test_bound_covers_residual(self):
        grid = FrequencyGrid(0.0, 500.0, 64)
        spec_gain = Gain(value=50.0)
        report = golden_rule_residual(spec_gain, rc_lowpass_block(1000.0, 1e-6), grid)
        valid = ~np.isnan(report.bound)
        assert np.all(report.residual[valid] <= report.bound[valid])

    @given(gain=st.floats(20.0, 1e5))
    @settings(max_examples=50, deadline=None)
    def test_residual_matches_closed_form(self, gain):
        grid = FrequencyGrid(0.0, 10.0, 16)
        report = golden_rule_residual(Gain(value=gain), Identity(), grid)
        assert report.max_residual == pytest.approx(1.0 / (1.0 + gain), rel=1e-12)

    @given(gain=st.floats(20.0, 1e4))
    @settings(max_examples=25, deadline=None)
    def test_halving_with_gain_doubling(self, gain):
        grid = FrequencyGrid(0.0, 10.0, 16)
        r1 = golden_rule_residual(Gain(value=gain), Identity(), grid).max_residual
        r2 = golden_rule_residual(Gain(value=2 * gain), Identity(), grid).max_residual
        assert r2 / r1 == pytest.approx(0.5, rel=0.1)


class TestInversionError:
    def test_matches_golden_rule_for_unity_feedback(self):
        grid = FrequencyGrid(0.0, 100.0, 32)
        err = inversion_error(Gain(value=99.0), Identity(), grid)
        assert err == pytest.approx(0.01, rel=1e-12)

    def test_high_gain_inverts_rc(self):
        rc = rc_lowpass_block(1000.0, 1e-6)
        grid = FrequencyGrid(0.0, 1000.0, 64)
        amp = Gain(value=1e5)
        assert inversion_error(amp, rc, grid) < 1e-3


class TestDelayCancellation:
    def test_matched_link_cancels(self):
        rc = rc_lowpass_block(1000.0, 1e-6)
        comp = make_ngd_compensator(
            CompensatorSpec(
                feedback_element=rc,
                amplifier=OpAmpModel(dc_gain=1000.0, pole_frequency=1e3),
            )
        )
        grid = FrequencyGrid(0.0, 500.0, 1024)
        report = delay_cancellation_report(rc, comp, grid)
        # compensator delay is negative, passive positive, total ~ 0
        assert np.all(report.tau_compensator < 0)
        assert np.all(report.tau_passive > 0)
        assert np.max(np.abs(report.tau_total)) < 0.02 * 1e-3

    def test_total_is_sum_of_parts(self):
        rc = rc_lowpass_block(1000.0, 1e-6)
        delay = PureDelay(tau_d=2e-3)
        grid = FrequencyGrid(0.0, 500.0, 256)
        report = delay_cancellation_report(rc, delay, grid)
        np.testing.assert_allclose(
            report.tau_total, report.tau_passive + report.tau_compensator, rtol=1e-6, atol=1e-9
        )


class TestMinimumPhase:
    def test_flat_magnitude_gives_zero_phase(self):
        grid = FrequencyGrid(0.0, 100.0, 257)
        phase = minimum_phase_reconstruction(np.ones(257), grid)
        np.testing.assert_allclose(phase, 0.0, atol=1e-12)

    def test_rc_phase_recovered(self):
        rc = 1e-3
        grid = FrequencyGrid(0.0, 2e5, 16384)
        omegas = grid.omegas()
        mag = 1.0 / np.sqrt(1.0 + (omegas * rc) ** 2)
        phase = minimum_phase_reconstruction(mag, grid)
        band = (omegas >= 100) & (omegas <= 1e4)
        expected = -np.arctan(omegas * rc)
        assert np.max(np.abs(phase[band] - expected[band])) < 0.02

    def test_requires_linear_grid_from_zero(self):
        grid = FrequencyGrid(1.0, 100.0, 64, spacing="logarithmic")
        with pytest.raises(InvalidParameter):
            minimum_phase_reconstruction(np.ones(64), grid)

    def test_rejects_nonpositive_magnitude(self):
        grid = FrequencyGrid(0.0, 100.0, 64)
        mag = np.ones(64)
        mag[10] = 0.0
        with pytest.raises(NonpositiveMagnitude):
            minimum_phase_reconstruction(mag, grid)

    def test_narrow_grid_rejected(self):
        # grid stops right at the RC corner: slope still steepening
        rc = 1e-3
        grid = FrequencyGrid(0.0, 2e3, 512)
        omegas = grid.omegas()
        mag = 1.0 / np.sqrt(1.0 + (omegas * rc) ** 2)
        with pytest.raises(GridTooNarrow):
            minimum_phase_reconstruction(mag, grid)


class TestBodeConsistency:
    GRID = FrequencyGrid(0.0, 2e5, 32768)
    BAND = (300.0, 1e4)

    def test_rc_within_tolerance(self):
        report = bode_consistency_report(rc_lowpass_block(1000.0, 1e-6), self.GRID, self.BAND)
        assert report.max_band_error < 0.02

    def test_rlc_dc_bin_floored(self):
        report = bode_consistency_report(
            rlc_bandpass_block(1000.0, 0.1, 1e-6), self.GRID, self.BAND
        )
        assert report.metadata["dc_bin_floored"] is True
        assert report.max_band_error < 0.02

    def test_pure_delay_reconstructs_to_zero(self):
        report = bode_consistency_report(PureDelay(tau_d=1e-3), self.GRID, self.BAND)
        assert report.max_reconstructed_abs < 1e-9
        # and therefore disagrees with the measured (delaying) phase
        assert report.max_band_error == pytest.approx(1e-3 * self.BAND[1], rel=1e-3)

    def test_band_must_sit_a_decade_inside(self):
        with pytest.raises(GridTooNarrow):
            bode_consistency_report(
                rc_lowpass_block(1000.0, 1e-6), self.GRID, (100.0, 5e4)
            )


class TestCausalityFront:
    def test_pure_delay_front_not_advanced(self):
        report = causality_front_test(
            PureDelay(tau_d=0.01),
            GaussianPulseSpec(center=0.5, fwhm=0.05),
            0.0,
            1e-3,
            1024,
        )
        assert report.output_cut is not None
        # the output front appears exactly one delay after the input cut
        assert report.front_advance == pytest.approx(-0.01, abs=2e-3)
        assert report.pre_cut_match_rms < 1e-6

    def test_identity_front_exact(self):
        report = causality_front_test(
            Identity(), GaussianPulseSpec(center=0.5, fwhm=0.05), 0.0, 1e-3, 1024
        )
        assert report.front_advance == pytest.approx(0.0, abs=1.5e-3)
        assert report.pre_cut_match_rms < 1e-9
