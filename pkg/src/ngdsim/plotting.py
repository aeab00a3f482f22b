"""Static SVG renderings of simulation results (non-interactive)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .lti import SpectrumAnalysis  # noqa: E402


def plot_time_traces(path: Path, signals: dict, title: str = "") -> None:
    """Overlay named time-domain traces in one SVG figure."""
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for name, sig in signals.items():
        ax.plot(sig.times, sig.samples, label=name, linewidth=1.2)
    ax.set_xlabel("time [s]")
    ax.set_ylabel("voltage [V]")
    if title:
        ax.set_title(title)
    ax.legend(loc="best")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def plot_spectrum(path: Path, report, title: str = "") -> None:
    """Bode pair (magnitude + phase, with group delay) for a spectrum report."""
    if not isinstance(report, SpectrumAnalysis):
        raise TypeError(f"expected SpectrumAnalysis, got {type(report).__name__}")
    omegas = report.grid.omegas()
    log_x = report.grid.spacing == "logarithmic"
    fig, (ax_mag, ax_phase) = plt.subplots(2, 1, figsize=(8, 6), sharex=True)
    ax_mag.plot(omegas, report.magnitude, linewidth=1.2)
    ax_mag.set_ylabel("|H|")
    if log_x:
        ax_mag.set_xscale("log")
        ax_mag.set_yscale("log")
    ax_mag.grid(True, which="both", alpha=0.3)
    if title:
        ax_mag.set_title(title)
    ax_phase.plot(omegas, report.phase_unwrapped, linewidth=1.2, label="phase [rad]")
    ax_gd = ax_phase.twinx()
    ax_gd.plot(omegas, report.group_delay, linewidth=1.0, color="tab:red",
               label="group delay [s]")
    ax_phase.set_xlabel("angular frequency [rad/s]")
    ax_phase.set_ylabel("phase [rad]")
    ax_gd.set_ylabel("group delay [s]")
    ax_phase.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
