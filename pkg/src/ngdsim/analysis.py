"""Structural claim checks: golden rule, inversion, delay cancellation,
minimum-phase (Bode) consistency, and front causality."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GridTooNarrow, InvalidParameter, NonpositiveMagnitude
from .lti import (
    FrequencyGrid,
    Series,
    TransferBlock,
    compose_feedback,
    evaluate_grid,
)
from .propagation import apply_filter, detect_discontinuity, discontinuity_threshold
from .signals import GaussianPulseSpec, gaussian_pulse, truncate_at_max


@dataclass(frozen=True)
class GoldenRuleReport:
    grid: FrequencyGrid
    residual: np.ndarray        # |A - B| / |A| per grid point
    max_residual: float
    bound: np.ndarray           # 1/(|FG| - 1) where |FG| > 1, else nan


@dataclass(frozen=True)
class DelayCancellationReport:
    grid: FrequencyGrid
    tau_passive: np.ndarray
    tau_compensator: np.ndarray
    tau_total: np.ndarray       # computed on the composed Series block


@dataclass(frozen=True)
class BodeReport:
    grid: FrequencyGrid
    phase_measured: np.ndarray
    phase_reconstructed: np.ndarray
    band: tuple[float, float]
    max_band_error: float
    max_reconstructed_abs: float
    metadata: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class FrontReport:
    input_cut: float
    output_cut: float | None
    front_advance: float | None   # input_cut - output_cut; positive = front earlier
    pre_cut_match_rms: float


def golden_rule_residual(
    forward: TransferBlock, feedback: TransferBlock, grid: FrequencyGrid
) -> GoldenRuleReport:
    """Per-frequency golden-rule residual |A - B| / |A| = |1 - F T|.

    B/A is evaluated through the composed closed loop, so the residual is
    the exact finite-gain correction, not an approximation.
    """
    omegas = grid.omegas()
    closed = compose_feedback(forward, feedback)
    residual = np.abs(1.0 - feedback.response(omegas) * closed.response(omegas))
    loop_gain = np.abs(feedback.response(omegas) * forward.response(omegas))
    with np.errstate(divide="ignore", invalid="ignore"):
        bound = np.where(loop_gain > 1.0, 1.0 / (loop_gain - 1.0), np.nan)
    return GoldenRuleReport(
        grid=grid,
        residual=residual,
        max_residual=float(np.max(residual)),
        bound=bound,
    )


def inversion_error(
    forward: TransferBlock, feedback: TransferBlock, grid: FrequencyGrid
) -> float:
    """max over the grid of |T F - 1|, the transfer-inversion residual."""
    omegas = grid.omegas()
    closed = compose_feedback(forward, feedback)
    return float(np.max(np.abs(closed.response(omegas) * feedback.response(omegas) - 1.0)))


def delay_cancellation_report(
    passive: TransferBlock, compensator: TransferBlock, grid: FrequencyGrid
) -> DelayCancellationReport:
    """Group delays of the passive element, the compensator, and their cascade.

    tau_total comes from evaluating the composed Series block, so additivity
    of series group delays is testable rather than assumed.
    """
    return DelayCancellationReport(
        grid=grid,
        tau_passive=evaluate_grid(passive, grid).group_delay,
        tau_compensator=evaluate_grid(compensator, grid).group_delay,
        tau_total=evaluate_grid(Series(blocks=(passive, compensator)), grid).group_delay,
    )


def minimum_phase_reconstruction(magnitude: np.ndarray, grid: FrequencyGrid) -> np.ndarray:
    """Phase from magnitude via the FFT discrete Hilbert transform.

    The log magnitude is extended evenly to negative frequencies, the
    analytic-signal multiplier (zero negative half, double positive half)
    applied, and the imaginary part taken; the sign is fixed so an RC
    low-pass magnitude reconstructs -arctan(omega RC).  Requires a uniform
    linear grid starting at omega = 0 extending well past the band of
    interest; a log-log slope taper check guards against short grids.
    """
    if grid.spacing != "linear" or grid.omega_min != 0.0:
        raise InvalidParameter("reconstruction needs a linear grid starting at omega = 0")
    mag = np.asarray(magnitude, dtype=float)
    if len(mag) != grid.count:
        raise InvalidParameter("magnitude length must match grid.count")
    if np.any(mag <= 0):
        raise NonpositiveMagnitude("magnitude must be strictly positive on the grid")
    log_mag = np.log(mag)

    # Taper check: the log-log slope over the last octave must match the
    # previous octave, i.e. the magnitude has reached its asymptotic
    # power-law regime at the top of the grid.
    n = grid.count
    i_half = (n - 1) // 2
    i_quarter = (n - 1) // 4
    slope_top = 0.0
    if i_quarter >= 1:
        slope_top = log_mag[-1] - log_mag[i_half]          # per octave
        slope_prev = log_mag[i_half] - log_mag[i_quarter]  # per octave
        if abs(slope_top - slope_prev) > 0.15:
            raise GridTooNarrow(
                "log-magnitude slope still changing at the top of the grid "
                f"({slope_prev:.3f} -> {slope_top:.3f} per octave); extend omega_max"
            )

    # Continue the tail past omega_max with the measured power-law slope
    # before transforming; the hard truncation otherwise leaks an error
    # ~ omega/omega_max into the interior band.
    extension = 16
    step = grid.omega_max / (n - 1)
    tail_omega = grid.omega_max + step * np.arange(1, extension * (n - 1) + 1)
    if i_quarter >= 1:
        tail = log_mag[-1] + slope_top * np.log2(tail_omega / grid.omega_max)
    else:
        tail = np.full_like(tail_omega, log_mag[-1])
    padded = np.concatenate([log_mag, tail])

    extended = np.concatenate([padded, padded[-2:0:-1]])  # even extension
    m = len(extended)
    spectrum = np.fft.fft(extended)
    mult = np.zeros(m)
    mult[0] = 1.0
    if m % 2 == 0:
        mult[1 : m // 2] = 2.0
        mult[m // 2] = 1.0
    else:
        mult[1 : (m + 1) // 2] = 2.0
    analytic = np.fft.ifft(spectrum * mult)
    return -np.imag(analytic[: grid.count])


def bode_consistency_report(
    block: TransferBlock,
    grid: FrequencyGrid,
    band: tuple[float, float],
) -> BodeReport:
    """Compare a block's measured phase against its minimum-phase reconstruction.

    Blocks with a transmission zero at DC (bandpass elements) have zero
    magnitude at the first grid point; that single bin is floored to its
    neighbor's value before taking logs (recorded in metadata).  The error
    is reported only over the interior comparison band, which must stay a
    decade below the top of the grid.
    """
    if band[1] * 10.0 > grid.omega_max:
        raise GridTooNarrow(
            f"band edge {band[1]:g} rad/s needs grid.omega_max >= {band[1] * 10:g}"
        )
    omegas = grid.omegas()
    resp = block.response(omegas)
    mag = np.abs(resp)
    floored_dc = False
    if mag[0] == 0.0 and np.all(mag[1:] > 0):
        mag = mag.copy()
        mag[0] = mag[1]
        floored_dc = True
    reconstructed = minimum_phase_reconstruction(mag, grid)
    measured = np.unwrap(np.angle(resp))
    mask = (omegas >= band[0]) & (omegas <= band[1])
    if not np.any(mask):
        raise InvalidParameter("comparison band contains no grid points")
    max_err = float(np.max(np.abs(reconstructed[mask] - measured[mask])))
    return BodeReport(
        grid=grid,
        phase_measured=measured,
        phase_reconstructed=reconstructed,
        band=band,
        max_band_error=max_err,
        max_reconstructed_abs=float(np.max(np.abs(reconstructed[mask]))),
        metadata={"dc_bin_floored": floored_dc},
    )


def causality_front_test(
    block: TransferBlock,
    pulse: GaussianPulseSpec,
    t0: float,
    dt: float,
    count: int,
) -> FrontReport:
    """Truncate a pulse at its peak, filter it, and compare fronts.

    Discontinuity thresholds are 25% of the largest adjacent-sample step of
    the corresponding untruncated waveform, so smooth slopes never trigger.
    pre_cut_match_rms compares the truncated-input output against the
    full-pulse output strictly before the cut.
    """
    full_in = gaussian_pulse(pulse, t0, dt, count)
    cut_in, cut_time = truncate_at_max(full_in)
    full_out = apply_filter(block, full_in)
    cut_out = apply_filter(block, cut_in)

    thr_in = discontinuity_threshold(full_in)
    thr_out = discontinuity_threshold(full_out)
    input_cut = detect_discontinuity(cut_in, thr_in)
    if input_cut is None:
        input_cut = cut_time
    output_cut = detect_discontinuity(cut_out, thr_out)
    front_advance = None if output_cut is None else input_cut - output_cut

    pre = full_in.times < input_cut
    ref = full_out.samples[pre]
    diff = cut_out.samples[pre] - ref
    denom = float(np.sqrt(np.sum(ref**2)))
    match = float(np.sqrt(np.sum(diff**2))) / denom if denom > 0 else 0.0
    return FrontReport(
        input_cut=input_cut,
        output_cut=output_cut,
        front_advance=front_advance,
        pre_cut_match_rms=match,
    )
