"""Transfer-function algebra: primitive blocks, composition, spectra.

Sign conventions (fixed once, used everywhere):

* frequency responses follow the engineering Fourier convention
  ``X(omega) = integral x(t) exp(-i omega t) dt``, so a pure delay by
  ``tau_d`` has response ``exp(-i omega tau_d)``;
* group delay is ``tau = -d(arg T)/d(omega)``, which makes a physical delay
  positive and an advance negative (``PureDelay(tau_d)`` has group delay
  exactly ``+tau_d``).

All primitive responses have real rational coefficients (plus delay
factors), so Hermitian symmetry ``H(-omega) = conj(H(+omega))`` holds by
construction and impulse responses are real.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import GridTooCoarse, InvalidParameter, PoleAtFrequency
from .signals import SampledSignal


class TransferBlock:
    """An evaluable complex frequency response H(omega)."""

    def response(self, omega):
        """Complex response at angular frequency ``omega`` (scalar or array).

        Raises PoleAtFrequency if a denominator is exactly zero at any
        requested frequency.
        """
        raise NotImplementedError


def _raise_pole(omega, bad_mask):
    omega = np.asarray(omega, dtype=float)
    if omega.ndim == 0:
        raise PoleAtFrequency(float(omega))
    idx = int(np.argmax(bad_mask))
    raise PoleAtFrequency(float(omega[idx]), grid_index=idx)


@dataclass(frozen=True)
class Identity(TransferBlock):
    def response(self, omega):
        return np.ones_like(np.asarray(omega, dtype=float)) + 0j


@dataclass(frozen=True)
class Gain(TransferBlock):
    """Frequency-independent real gain (may be zero or negative)."""

    value: float

    def response(self, omega):
        return np.full_like(np.asarray(omega, dtype=float), self.value) + 0j


@dataclass(frozen=True)
class PureDelay(TransferBlock):
    """Ideal delay line: exp(-i omega tau_d)."""

    tau_d: float

    def __post_init__(self):
        if self.tau_d < 0:
            raise InvalidParameter(f"delay must be >= 0, got {self.tau_d}")

    def response(self, omega):
        return np.exp(-1j * self.tau_d * np.asarray(omega, dtype=float))


@dataclass(frozen=True)
class Rational(TransferBlock):
    """Rational function of s = i*omega with real coefficients.

    Coefficients are low-to-high: num=(1, a) means 1 + a*s.  Real
    coefficients guarantee Hermitian symmetry.
    """

    num: tuple
    den: tuple

    def __post_init__(self):
        num = tuple(float(c) for c in self.num)
        den = tuple(float(c) for c in self.den)
        if not num or not den:
            raise InvalidParameter("num and den must be non-empty")
        if not any(den):
            raise InvalidParameter("denominator is identically zero")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def response(self, omega):
        s = 1j * np.asarray(omega, dtype=float)
        den = npoly.polyval(s, self.den)
        bad = den == 0
        if np.any(bad):
            _raise_pole(omega, bad)
        return npoly.polyval(s, self.num) / den


@dataclass(frozen=True)
class Series(TransferBlock):
    """Ordered cascade; response is the product of member responses."""

    blocks: tuple

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        if not self.blocks:
            raise InvalidParameter("Series needs at least one block")

    def response(self, omega):
        out = np.ones_like(np.asarray(omega, dtype=float)) + 0j
        for block in self.blocks:
            out = out * block.response(omega)
        return out


@dataclass(frozen=True)
class FeedbackLoop(TransferBlock):
    """Negative-feedback closed loop: T = G / (1 + F G).

    ``forward`` is the amplifier G, ``feedback`` the return path F.
    """

    forward: TransferBlock
    feedback: TransferBlock

    def response(self, omega):
        g = self.forward.response(omega)
        f = self.feedback.response(omega)
        den = 1.0 + f * g
        bad = den == 0
        if np.any(bad):
            _raise_pole(omega, bad)
        return g / den


def evaluate(block: TransferBlock, omega: float) -> complex:
    """Scalar evaluation of a block at one angular frequency."""
    if not np.isfinite(omega):
        raise InvalidParameter(f"omega must be finite, got {omega}")
    return complex(block.response(float(omega)))


def compose_feedback(forward: TransferBlock, feedback: TransferBlock) -> FeedbackLoop:
    """Close a negative-feedback loop around ``forward`` with return path ``feedback``."""
    return FeedbackLoop(forward=forward, feedback=feedback)


@dataclass(frozen=True)
class FrequencyGrid:
    omega_min: float
    omega_max: float
    count: int
    spacing: str = "linear"

    def __post_init__(self):
        if not (0 <= self.omega_min < self.omega_max):
            raise InvalidParameter(
                f"need 0 <= omega_min < omega_max, got [{self.omega_min}, {self.omega_max}]"
            )
        if self.count < 2:
            raise InvalidParameter(f"count must be >= 2, got {self.count}")
        if self.spacing not in ("linear", "logarithmic"):
            raise InvalidParameter(f"unknown spacing {self.spacing!r}")
        if self.spacing == "logarithmic" and self.omega_min <= 0:
            raise InvalidParameter("logarithmic spacing needs omega_min > 0")

    def omegas(self) -> np.ndarray:
        if self.spacing == "linear":
            return np.linspace(self.omega_min, self.omega_max, self.count)
        return np.geomspace(self.omega_min, self.omega_max, self.count)


@dataclass(frozen=True)
class SpectrumAnalysis:
    grid: FrequencyGrid
    magnitude: np.ndarray
    phase_unwrapped: np.ndarray
    group_delay: np.ndarray
    metadata: dict = field(default_factory=dict, compare=False)


def unwrap_phase(phase_principal: np.ndarray) -> np.ndarray:
    """Cumulative-jump phase unwrapping anchored at the first sample."""
    return np.unwrap(np.asarray(phase_principal, dtype=float))


def group_delay_curve(phase_unwrapped: np.ndarray, grid: FrequencyGrid) -> np.ndarray:
    """tau(omega) = -d(phase)/d(omega) by finite differences.

    Central differences at interior points, one-sided at the endpoints.
    Raises GridTooCoarse when adjacent phase samples differ by more than
    pi/2 (the unwrapping itself would be ambiguous at that density).
    """
    phase = np.asarray(phase_unwrapped, dtype=float)
    if grid.count < 3 or len(phase) != grid.count:
        raise InvalidParameter("need grid.count >= 3 matching the phase array")
    steps = np.abs(np.diff(phase))
    if np.any(steps > np.pi / 2):
        idx = int(np.argmax(steps > np.pi / 2))
        raise GridTooCoarse(
            f"phase jumps {steps[idx]:.3f} rad between grid points {idx} and {idx + 1}"
        )
    return -np.gradient(phase, grid.omegas())


def evaluate_grid(block: TransferBlock, grid: FrequencyGrid) -> SpectrumAnalysis:
    """Bulk evaluation: magnitude, unwrapped phase, and group delay on a grid."""
    resp = block.response(grid.omegas())
    magnitude = np.abs(resp)
    phase = unwrap_phase(np.angle(resp))
    gd = group_delay_curve(phase, grid)
    return SpectrumAnalysis(grid=grid, magnitude=magnitude, phase_unwrapped=phase, group_delay=gd)


def impulse_response(block: TransferBlock, sample_count: int, dt: float) -> SampledSignal:
    """Real impulse response via the inverse FFT of the sampled spectrum.

    t = 0 sits at index 0; negative times wrap to the upper half of the
    buffer.  ``sample_count`` must be a power of two >= 64.
    """
    n = int(sample_count)
    if n < 64 or (n & (n - 1)) != 0:
        raise InvalidParameter(f"sample_count must be a power of two >= 64, got {sample_count}")
    if not (dt > 0):
        raise InvalidParameter(f"dt must be positive, got {dt}")
    omega = 2.0 * np.pi * np.fft.rfftfreq(n, dt)
    resp = np.asarray(block.response(omega), dtype=complex)
    # Hermitian symmetry makes the result real; the Nyquist bin must be real.
    resp[0] = resp[0].real
    resp[-1] = resp[-1].real
    h = np.fft.irfft(resp, n)
    return SampledSignal(t0=0.0, dt=dt, samples=h, metadata={"fft_size": n})
