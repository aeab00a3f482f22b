"""Sampled waveforms and the generators used by the pulse experiments.

All waveforms are real voltages on a uniform time grid.  Generators are pure
functions; metadata on the returned signal records anything a test might need
to reproduce a measurement (tie-breaking, window coverage warnings, ...).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameter

_LN2 = float(np.log(2.0))


@dataclass(frozen=True)
class SampledSignal:
    """Uniformly sampled real waveform; ``t0`` is the time of ``samples[0]``."""

    t0: float
    dt: float
    samples: np.ndarray
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not (self.dt > 0):
            raise InvalidParameter(f"dt must be positive, got {self.dt}")
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 1 or samples.size < 2:
            raise InvalidParameter("samples must be a 1-D array with length >= 2")
        if not np.all(np.isfinite(samples)):
            raise InvalidParameter("samples must be finite")
        object.__setattr__(self, "samples", samples)

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self.samples))

    def __len__(self) -> int:
        return len(self.samples)

    def energy(self) -> float:
        """Sum of squared samples times dt (discrete signal energy)."""
        return float(np.sum(self.samples**2) * self.dt)


@dataclass(frozen=True)
class GaussianPulseSpec:
    center: float
    fwhm: float
    amplitude: float = 1.0

    def __post_init__(self):
        if not (self.fwhm > 0):
            raise InvalidParameter(f"fwhm must be positive, got {self.fwhm}")


@dataclass(frozen=True)
class SquareWaveSpec:
    period: float
    duty: float = 0.5
    low: float = 0.0
    high: float = 1.0

    def __post_init__(self):
        if not (self.period > 0):
            raise InvalidParameter(f"period must be positive, got {self.period}")
        if not (0.0 < self.duty < 1.0):
            raise InvalidParameter(f"duty must lie in (0, 1), got {self.duty}")
        if not (self.high > self.low):
            raise InvalidParameter("high must exceed low")


def gaussian_pulse(spec: GaussianPulseSpec, t0: float, dt: float, count: int) -> SampledSignal:
    """Gaussian voltage pulse, width parameterized by FWHM.

    samples[k] = amplitude * exp(-4 ln2 * ((t_k - center) / fwhm)^2)
    """
    if count < 16:
        raise InvalidParameter(f"count must be >= 16, got {count}")
    if not (dt > 0):
        raise InvalidParameter(f"dt must be positive, got {dt}")
    t = t0 + dt * np.arange(count)
    samples = spec.amplitude * np.exp(-4.0 * _LN2 * ((t - spec.center) / spec.fwhm) ** 2)
    covered = bool(
        t[0] <= spec.center - 5 * spec.fwhm and t[-1] >= spec.center + 5 * spec.fwhm
    )
    meta = {"window_covers_5_fwhm": covered}
    return SampledSignal(t0=t0, dt=dt, samples=samples, metadata=meta)


def square_wave(spec: SquareWaveSpec, t0: float, dt: float, count: int) -> SampledSignal:
    """Square wave, phase-anchored so a rising edge occurs at t = 0.

    Values are exactly ``spec.high`` for the first ``duty`` fraction of each
    period and exactly ``spec.low`` for the rest.
    """
    if spec.period < 10 * dt:
        raise InvalidParameter("period must be at least 10 samples long")
    if count < 2:
        raise InvalidParameter("count must be >= 2")
    t = t0 + dt * np.arange(count)
    phase = np.mod(t / spec.period, 1.0)
    samples = np.where(phase < spec.duty, spec.high, spec.low)
    return SampledSignal(t0=t0, dt=dt, samples=samples.astype(float))


def truncate_at_max(signal: SampledSignal) -> tuple[SampledSignal, float]:
    """Short the signal to zero immediately after its global maximum.

    Ties at the maximum break toward the earliest index (recorded in the
    result metadata).  Returns the truncated signal and the cut time.
    """
    idx = int(np.argmax(signal.samples))  # argmax takes the earliest on ties
    ties = int(np.sum(signal.samples == signal.samples[idx]))
    out = signal.samples.copy()
    out[idx + 1 :] = 0.0
    cut_time = signal.t0 + idx * signal.dt
    meta = dict(signal.metadata)
    meta.update({"cut_index": idx, "max_tie_count": ties})
    return SampledSignal(t0=signal.t0, dt=signal.dt, samples=out, metadata=meta), cut_time
