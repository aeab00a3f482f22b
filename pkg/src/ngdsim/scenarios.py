"""Declarative scenario runner.

A scenario is a JSON-serializable dict (schema_version 1) with named
``blocks`` and ``signals``, an ordered ``pipeline`` of measurement steps,
declared ``outputs`` (CSV / SVG / summary JSON), and ``expectations``
checked against scalar metrics produced by the steps.
"""

from __future__ import annotations

import copy
import csv
import json
import time
from dataclasses import dataclass, field, is_dataclass
from pathlib import Path

import numpy as np

from . import blocks as cb
from .analysis import (
    bode_consistency_report,
    causality_front_test,
    delay_cancellation_report,
    golden_rule_residual,
    inversion_error,
)
from .errors import ConfigError, SimulationError
from .lti import (
    FrequencyGrid,
    Gain,
    Identity,
    PureDelay,
    Series,
    SpectrumAnalysis,
    TransferBlock,
    evaluate_grid,
    impulse_response,
)
from .propagation import (
    apply_filter,
    detect_discontinuity,
    discontinuity_threshold,
    load_power,
    measure_peak_advance,
    rise_time_10_90,
)
from .signals import (
    GaussianPulseSpec,
    SampledSignal,
    SquareWaveSpec,
    gaussian_pulse,
    square_wave,
)

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def _need(d: dict, key: str, path: str):
    if key not in d:
        raise ConfigError(path, f"missing required field {key!r}")
    return d[key]


def _build_grid(spec: dict, path: str) -> FrequencyGrid:
    try:
        return FrequencyGrid(
            omega_min=float(_need(spec, "omega_min", path)),
            omega_max=float(_need(spec, "omega_max", path)),
            count=int(_need(spec, "count", path)),
            spacing=spec.get("spacing", "linear"),
        )
    except SimulationError as exc:
        raise ConfigError(path, str(exc)) from exc


def _build_block(spec, built: dict, path: str) -> TransferBlock:
    """Build a block from its definition; strings reference already-built blocks."""
    if isinstance(spec, str):
        if spec not in built:
            raise ConfigError(path, f"unknown block reference {spec!r}")
        return built[spec]
    if not isinstance(spec, dict):
        raise ConfigError(path, f"block definition must be a name or mapping, got {type(spec)}")
    kind = _need(spec, "kind", path)
    try:
        if kind == "identity":
            return Identity()
        if kind == "gain":
            return Gain(value=float(_need(spec, "value", path)))
        if kind == "pure_delay":
            return PureDelay(tau_d=float(_need(spec, "tau_d", path)))
        if kind == "rc_lowpass":
            return cb.rc_lowpass_block(
                float(_need(spec, "resistance", path)), float(_need(spec, "capacitance", path))
            )
        if kind == "rlc_bandpass":
            return cb.rlc_bandpass_block(
                float(_need(spec, "resistance", path)),
                float(_need(spec, "inductance", path)),
                float(_need(spec, "capacitance", path)),
            )
        if kind == "rlc_lowpass":
            return cb.rlc_lowpass_block(
                float(_need(spec, "resistance", path)),
                float(_need(spec, "inductance", path)),
                float(_need(spec, "capacitance", path)),
            )
        if kind == "opamp":
            return cb.opamp_block(_build_amplifier(spec, path))
        if kind == "series":
            members = _need(spec, "blocks", path)
            if not members:
                raise ConfigError(path, "series needs at least one member")
            return Series(
                blocks=tuple(
                    _build_block(m, built, f"{path}.blocks[{i}]") for i, m in enumerate(members)
                )
            )
        if kind == "ngd_compensator":
            return cb.make_ngd_compensator(
                cb.CompensatorSpec(
                    feedback_element=_build_block(
                        _need(spec, "feedback", path), built, f"{path}.feedback"
                    ),
                    amplifier=_build_amplifier(spec, path),
                ),
                check_stability=bool(spec.get("check_stability", True)),
            )
        if kind == "compensated_link":
            return cb.make_compensated_link(
                _build_block(_need(spec, "passive", path), built, f"{path}.passive"),
                _build_block(_need(spec, "compensator", path), built, f"{path}.compensator"),
            )
        if kind == "pulse_advance_compensator":
            return cb.pulse_advance_compensator()
    except ConfigError:
        raise
    except SimulationError as exc:
        raise ConfigError(path, str(exc)) from exc
    raise ConfigError(path, f"unknown block kind {kind!r}")


def _build_amplifier(spec: dict, path: str) -> cb.OpAmpModel:
    try:
        return cb.OpAmpModel(
            dc_gain=float(_need(spec, "dc_gain", path)),
            pole_frequency=float(_need(spec, "pole_frequency", path)),
        )
    except SimulationError as exc:
        raise ConfigError(path, str(exc)) from exc


def _build_signal(spec: dict, path: str) -> SampledSignal:
    kind = _need(spec, "kind", path)
    try:
        t0 = float(_need(spec, "t0", path))
        dt = float(_need(spec, "dt", path))
        count = int(_need(spec, "count", path))
        if kind == "gaussian":
            return gaussian_pulse(
                GaussianPulseSpec(
                    center=float(_need(spec, "center", path)),
                    fwhm=float(_need(spec, "fwhm", path)),
                    amplitude=float(spec.get("amplitude", 1.0)),
                ),
                t0,
                dt,
                count,
            )
        if kind == "square":
            return square_wave(
                SquareWaveSpec(
                    period=float(_need(spec, "period", path)),
                    duty=float(spec.get("duty", 0.5)),
                    low=float(spec.get("low", 0.0)),
                    high=float(spec.get("high", 1.0)),
                ),
                t0,
                dt,
                count,
            )
    except ConfigError:
        raise
    except SimulationError as exc:
        raise ConfigError(path, str(exc)) from exc
    raise ConfigError(path, f"unknown signal kind {kind!r}")


# ---------------------------------------------------------------------------
# Pipeline steps
# ---------------------------------------------------------------------------


class _RunState:
    def __init__(self):
        self.blocks: dict[str, TransferBlock] = {}
        self.signals: dict[str, SampledSignal] = {}
        self.reports: dict[str, object] = {}

    def block(self, name, path):
        if name not in self.blocks:
            raise ConfigError(path, f"unknown block {name!r}")
        return self.blocks[name]

    def signal(self, name, path):
        if name not in self.signals:
            raise ConfigError(path, f"unknown signal {name!r}")
        return self.signals[name]


def _step_filter(state: _RunState, step: dict, path: str):
    out = apply_filter(
        state.block(_need(step, "block", path), path),
        state.signal(_need(step, "input", path), path),
    )
    state.signals[_need(step, "output", path)] = out
    return None


def _step_truncate(state, step, path):
    from .signals import truncate_at_max

    cut, cut_time = truncate_at_max(state.signal(_need(step, "input", path), path))
    state.signals[_need(step, "output", path)] = cut
    return {"cut_time": cut_time}


def _step_peak_advance(state, step, path):
    return measure_peak_advance(
        state.signal(_need(step, "input", path), path),
        state.signal(_need(step, "output", path), path),
    )


def _step_rise_time(state, step, path):
    value = rise_time_10_90(
        state.signal(_need(step, "input", path), path),
        float(_need(step, "low", path)),
        float(_need(step, "high", path)),
        tuple(float(v) for v in _need(step, "window", path)),
    )
    return {"rise_time": value}


def _step_settle_check(state, step, path):
    """Max deviation from a target level over a window, as a fraction of swing."""
    sig = state.signal(_need(step, "input", path), path)
    level = float(_need(step, "level", path))
    swing = float(_need(step, "swing", path))
    window = tuple(float(v) for v in _need(step, "window", path))
    t = sig.times
    mask = (t >= window[0]) & (t <= window[1])
    if not np.any(mask):
        raise ConfigError(path, "settle window contains no samples")
    max_dev = float(np.max(np.abs(sig.samples[mask] - level))) / abs(swing)
    return {"max_deviation_fraction": max_dev, "settled": bool(max_dev <= 0.1)}


def _step_load_power(state, step, path):
    sig = state.signal(_need(step, "input", path), path)
    report = load_power(sig, float(_need(step, "r_load", path)))
    if "power_output" in step:
        state.signals[step["power_output"]] = report.power
    v_idx = int(np.argmax(np.abs(sig.samples)))
    p_idx = int(np.argmax(report.power.samples))
    return {
        "peak_power_time": report.peak_power_time,
        "total_energy": float(report.cumulative_energy[-1]),
        "voltage_peak_index": v_idx,
        "power_peak_index": p_idx,
        "indices_match": bool(v_idx == p_idx),
    }


def _step_detect_discontinuity(state, step, path):
    sig = state.signal(_need(step, "input", path), path)
    if "threshold" in step:
        threshold = float(step["threshold"])
    else:
        ref = state.signal(_need(step, "reference", path), path)
        threshold = discontinuity_threshold(ref, float(step.get("fraction", 0.25)))
    return {"time": detect_discontinuity(sig, threshold), "threshold": threshold}


def _step_golden_rule(state, step, path):
    return golden_rule_residual(
        state.block(_need(step, "forward", path), path),
        state.block(_need(step, "feedback", path), path),
        _build_grid(_need(step, "grid", path), f"{path}.grid"),
    )


def _step_inversion_error(state, step, path):
    value = inversion_error(
        state.block(_need(step, "forward", path), path),
        state.block(_need(step, "feedback", path), path),
        _build_grid(_need(step, "grid", path), f"{path}.grid"),
    )
    return {"max_error": value}


def _step_delay_cancellation(state, step, path):
    report = delay_cancellation_report(
        state.block(_need(step, "passive", path), path),
        state.block(_need(step, "compensator", path), path),
        _build_grid(_need(step, "grid", path), f"{path}.grid"),
    )
    return report


def _step_bode_check(state, step, path):
    return bode_consistency_report(
        state.block(_need(step, "block", path), path),
        _build_grid(_need(step, "grid", path), f"{path}.grid"),
        tuple(float(v) for v in _need(step, "band", path)),
    )


def _step_causality_front(state, step, path):
    return causality_front_test(
        state.block(_need(step, "block", path), path),
        GaussianPulseSpec(
            center=float(_need(step, "center", path)),
            fwhm=float(_need(step, "fwhm", path)),
            amplitude=float(step.get("amplitude", 1.0)),
        ),
        float(_need(step, "t0", path)),
        float(_need(step, "dt", path)),
        int(_need(step, "count", path)),
    )


def _step_spectrum(state, step, path):
    return evaluate_grid(
        state.block(_need(step, "block", path), path),
        _build_grid(_need(step, "grid", path), f"{path}.grid"),
    )


def _step_gain_feedback(state, step, path):
    return cb.gain_feedback_check(
        cb.CompensatorSpec(
            feedback_element=state.block(_need(step, "feedback", path), path),
            amplifier=_build_amplifier(step, path),
        ),
        _build_grid(_need(step, "grid", path), f"{path}.grid"),
        float(step.get("threshold", 100.0)),
    )


def _step_stability(state, step, path):
    spec = cb.CompensatorSpec(
        feedback_element=state.block(_need(step, "feedback", path), path),
        amplifier=_build_amplifier(step, path),
    )
    grid = _build_grid(step["grid"], f"{path}.grid") if "grid" in step else None
    return cb.stability_probe(spec, grid)


def _step_negative_time_energy(state, step, path):
    """Fraction of impulse-response energy at negative times (wrapped upper half)."""
    h = impulse_response(
        state.block(_need(step, "block", path), path),
        int(_need(step, "count", path)),
        float(_need(step, "dt", path)),
    )
    n = len(h)
    total = float(np.sum(h.samples**2))
    negative = float(np.sum(h.samples[n // 2 :] ** 2))
    fraction = negative / total if total > 0 else 0.0
    return {"negative_energy_fraction": fraction, "total_energy": total * h.dt}


_STEPS = {
    "filter": _step_filter,
    "truncate_at_max": _step_truncate,
    "peak_advance": _step_peak_advance,
    "rise_time": _step_rise_time,
    "settle_check": _step_settle_check,
    "load_power": _step_load_power,
    "detect_discontinuity": _step_detect_discontinuity,
    "golden_rule": _step_golden_rule,
    "inversion_error": _step_inversion_error,
    "delay_cancellation": _step_delay_cancellation,
    "bode_check": _step_bode_check,
    "causality_front": _step_causality_front,
    "spectrum": _step_spectrum,
    "gain_feedback_check": _step_gain_feedback,
    "stability_probe": _step_stability,
    "negative_time_energy": _step_negative_time_energy,
}


# ---------------------------------------------------------------------------
# Metrics, expectations, summary
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExpectationResult:
    metric: str
    value: float | bool | None
    constraint: str
    passed: bool


@dataclass(frozen=True)
class RunSummary:
    name: str
    passed: bool
    checks: tuple
    metrics: dict = field(default_factory=dict)
    duration_s: float = 0.0

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "duration_s": self.duration_s,
            "checks": [
                {
                    "metric": c.metric,
                    "value": c.value,
                    "constraint": c.constraint,
                    "passed": c.passed,
                }
                for c in self.checks
            ],
            "metrics": self.metrics,
        }


def _resolve_metric(reports: dict, dotted: str):
    parts = dotted.split(".")
    if parts[0] not in reports:
        raise ConfigError(f"expectations.{dotted}", f"no report named {parts[0]!r}")
    obj = reports[parts[0]]
    for part in parts[1:]:
        if isinstance(obj, dict):
            if part not in obj:
                raise ConfigError(f"expectations.{dotted}", f"no field {part!r}")
            obj = obj[part]
        elif hasattr(obj, part):
            obj = getattr(obj, part)
        else:
            raise ConfigError(f"expectations.{dotted}", f"no field {part!r}")
    return obj


def _scalar_metrics(reports: dict) -> dict:
    """Flatten reports into dotted-name scalars for summaries and sweep tables."""
    flat = {}
    for name, report in reports.items():
        if isinstance(report, dict):
            items = report.items()
        elif is_dataclass(report):
            items = vars(report).items()
        else:
            continue
        for key, value in items:
            if isinstance(value, (bool, int, float)) or value is None:
                flat[f"{name}.{key}"] = value
    return flat


def _check_expectation(exp: dict, reports: dict, tolerance_scale: float) -> ExpectationResult:
    metric = _need(exp, "metric", "expectations")
    value = _resolve_metric(reports, metric)
    if "equals" in exp:
        passed = value == exp["equals"]
        constraint = f"== {exp['equals']}"
    elif "target" in exp:
        target = float(exp["target"])
        if "rel_tol" in exp:
            tol = float(exp["rel_tol"]) * tolerance_scale * abs(target)
        else:
            tol = float(exp.get("abs_tol", 0.0)) * tolerance_scale
        passed = value is not None and abs(float(value) - target) <= tol
        constraint = f"= {target:g} ± {tol:g}"
    elif "max" in exp:
        bound = float(exp["max"]) * tolerance_scale
        passed = value is not None and float(value) <= bound
        constraint = f"<= {bound:g}"
    elif "min" in exp:
        bound = float(exp["min"]) / tolerance_scale
        passed = value is not None and float(value) >= bound
        constraint = f">= {bound:g}"
    else:
        raise ConfigError("expectations", f"{metric}: needs one of equals/target/max/min")
    if isinstance(value, (np.floating, np.integer)):
        value = float(value)
    return ExpectationResult(metric=metric, value=value, constraint=constraint, passed=bool(passed))


# ---------------------------------------------------------------------------
# Outputs
# ---------------------------------------------------------------------------


def _fmt(value) -> str:
    return f"{value:.12g}"


def _write_csv_signals(path: Path, signals: dict, names: list):
    first = signals[names[0]]
    for name in names[1:]:
        sig = signals[name]
        if not (sig.t0 == first.t0 and sig.dt == first.dt and len(sig) == len(first)):
            raise ConfigError("outputs", f"signal {name!r} is not on the same time grid")
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["time_s"] + list(names))
        times = first.times
        columns = [signals[n].samples for n in names]
        for i in range(len(first)):
            writer.writerow([_fmt(times[i])] + [_fmt(col[i]) for col in columns])


def _write_csv_spectrum(path: Path, report):
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        if isinstance(report, SpectrumAnalysis):
            writer.writerow(["omega_rad_s", "magnitude", "phase_rad", "group_delay_s"])
            omegas = report.grid.omegas()
            for i in range(report.grid.count):
                writer.writerow(
                    [
                        _fmt(omegas[i]),
                        _fmt(report.magnitude[i]),
                        _fmt(report.phase_unwrapped[i]),
                        _fmt(report.group_delay[i]),
                    ]
                )
        elif hasattr(report, "tau_total"):
            writer.writerow(["omega_rad_s", "tau_passive_s", "tau_compensator_s", "tau_total_s"])
            omegas = report.grid.omegas()
            for i in range(report.grid.count):
                writer.writerow(
                    [
                        _fmt(omegas[i]),
                        _fmt(report.tau_passive[i]),
                        _fmt(report.tau_compensator[i]),
                        _fmt(report.tau_total[i]),
                    ]
                )
        elif hasattr(report, "residual"):
            writer.writerow(["omega_rad_s", "residual", "bound"])
            omegas = report.grid.omegas()
            for i in range(report.grid.count):
                writer.writerow(
                    [_fmt(omegas[i]), _fmt(report.residual[i]), _fmt(report.bound[i])]
                )
        elif hasattr(report, "phase_reconstructed"):
            writer.writerow(["omega_rad_s", "phase_measured_rad", "phase_reconstructed_rad"])
            omegas = report.grid.omegas()
            for i in range(report.grid.count):
                writer.writerow(
                    [
                        _fmt(omegas[i]),
                        _fmt(report.phase_measured[i]),
                        _fmt(report.phase_reconstructed[i]),
                    ]
                )
        else:
            raise ConfigError("outputs", f"report type {type(report).__name__} has no CSV layout")


def _write_outputs(config: dict, state: _RunState, summary: RunSummary, out_dir: Path):
    from . import plotting

    out_dir.mkdir(parents=True, exist_ok=True)
    for i, out in enumerate(config.get("outputs", [])):
        path_str = _need(out, "path", f"outputs[{i}]")
        target = out_dir / path_str
        kind = _need(out, "kind", f"outputs[{i}]")
        if kind == "csv":
            names = _need(out, "signals", f"outputs[{i}]")
            for name in names:
                state.signal(name, f"outputs[{i}]")
            _write_csv_signals(target, state.signals, names)
        elif kind == "csv_spectrum":
            report_name = _need(out, "report", f"outputs[{i}]")
            if report_name not in state.reports:
                raise ConfigError(f"outputs[{i}]", f"unknown report {report_name!r}")
            _write_csv_spectrum(target, state.reports[report_name])
        elif kind == "svg":
            names = _need(out, "signals", f"outputs[{i}]")
            plotting.plot_time_traces(
                target,
                {name: state.signal(name, f"outputs[{i}]") for name in names},
                title=out.get("title", config.get("name", "")),
            )
        elif kind == "svg_spectrum":
            report_name = _need(out, "report", f"outputs[{i}]")
            if report_name not in state.reports:
                raise ConfigError(f"outputs[{i}]", f"unknown report {report_name!r}")
            plotting.plot_spectrum(
                target, state.reports[report_name], title=out.get("title", report_name)
            )
        elif kind == "summary":
            with target.open("w") as fh:
                json.dump(summary.to_dict(), fh, indent=2, sort_keys=True)
                fh.write("\n")
        else:
            raise ConfigError(f"outputs[{i}]", f"unknown output kind {kind!r}")


# ---------------------------------------------------------------------------
# Runner
# ---------------------------------------------------------------------------


def validate_config(config: dict) -> None:
    if not isinstance(config, dict):
        raise ConfigError("", "config must be a mapping")
    version = config.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError("schema_version", f"expected {SCHEMA_VERSION}, got {version!r}")
    if not isinstance(config.get("name"), str) or not config["name"]:
        raise ConfigError("name", "scenario needs a non-empty name")


def run_scenario(
    config: dict,
    out_dir: str | Path | None = None,
    tolerance_scale: float = 1.0,
) -> RunSummary:
    """Execute one scenario; returns the summary (pass/fail + metrics).

    ConfigError signals an invalid config; other SimulationErrors are
    re-raised annotated with the failing pipeline step.
    """
    start = time.perf_counter()
    validate_config(config)
    if not (tolerance_scale > 0):
        raise ConfigError("tolerance_scale", f"must be positive, got {tolerance_scale}")
    state = _RunState()
    for name, spec in config.get("blocks", {}).items():
        state.blocks[name] = _build_block(spec, state.blocks, f"blocks.{name}")
    for name, spec in config.get("signals", {}).items():
        state.signals[name] = _build_signal(spec, f"signals.{name}")

    for i, step in enumerate(config.get("pipeline", [])):
        path = f"pipeline[{i}]"
        op = _need(step, "op", path)
        if op not in _STEPS:
            raise ConfigError(path, f"unknown op {op!r}")
        try:
            report = _STEPS[op](state, step, path)
        except ConfigError:
            raise
        except SimulationError as exc:
            exc.args = (f"{path} ({op}): {exc}",)
            raise
        if report is not None and "report" in step:
            state.reports[step["report"]] = report

    checks = tuple(
        _check_expectation(exp, state.reports, tolerance_scale)
        for exp in config.get("expectations", [])
    )
    summary = RunSummary(
        name=config["name"],
        passed=all(c.passed for c in checks),
        checks=checks,
        metrics=_scalar_metrics(state.reports),
        duration_s=time.perf_counter() - start,
    )
    if out_dir is not None:
        _write_outputs(config, state, summary, Path(out_dir))
    return summary


def _set_by_path(config: dict, dotted: str, value: float):
    parts = dotted.split(".")
    obj = config
    for part in parts[:-1]:
        if isinstance(obj, list):
            obj = obj[int(part)]
        elif isinstance(obj, dict) and part in obj:
            obj = obj[part]
        else:
            raise ConfigError(dotted, f"path component {part!r} not found")
    last = parts[-1]
    if isinstance(obj, list):
        obj[int(last)] = value
    elif isinstance(obj, dict) and last in obj:
        if not isinstance(obj[last], (int, float)) or isinstance(obj[last], bool):
            raise ConfigError(dotted, "path does not resolve to a numeric field")
        obj[last] = value
    else:
        raise ConfigError(dotted, f"path component {last!r} not found")


def sweep(
    config: dict,
    parameter_path: str,
    values,
    out_dir: str | Path | None = None,
    tolerance_scale: float = 1.0,
) -> list[dict]:
    """Re-run a scenario once per parameter value; returns one metrics row each.

    Writes ``sweep.csv`` (one row per value, columns = scalar metrics) under
    ``out_dir`` when given.  Per-run file outputs are suppressed; only the
    table is written.
    """
    values = list(values)
    if not values:
        raise ConfigError(parameter_path, "sweep needs at least one value")
    rows = []
    for value in values:
        variant = copy.deepcopy(config)
        _set_by_path(variant, parameter_path, float(value))
        summary = run_scenario(variant, out_dir=None, tolerance_scale=tolerance_scale)
        row = {"parameter": parameter_path, "value": float(value), "passed": summary.passed}
        row.update(summary.metrics)
        rows.append(row)
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        keys = ["parameter", "value", "passed"]
        extra = sorted({k for row in rows for k in row} - set(keys))
        with (out_dir / "sweep.csv").open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(keys + extra)
            for row in rows:
                writer.writerow(
                    [
                        _fmt(row[k]) if isinstance(row.get(k), float) else row.get(k, "")
                        for k in keys + extra
                    ]
                )
    return rows


# ---------------------------------------------------------------------------
# Built-in scenarios
# ---------------------------------------------------------------------------

_FIG2_SIGNAL = {
    "kind": "gaussian",
    "center": 0.35,
    "fwhm": 0.025,
    "amplitude": 1.0,
    "t0": 0.0,
    "dt": 5e-5,
    "count": 16384,
}


def _builtin_identity_smoke() -> dict:
    return {
        "schema_version": 1,
        "name": "identity_smoke",
        "description": "Gaussian through an identity block: zero advance, zero distortion.",
        "blocks": {"wire": {"kind": "identity"}},
        "signals": {"input": dict(_FIG2_SIGNAL)},
        "pipeline": [
            {"op": "filter", "block": "wire", "input": "input", "output": "output"},
            {"op": "peak_advance", "input": "input", "output": "output", "report": "delay"},
        ],
        "outputs": [
            {"kind": "csv", "path": "traces.csv", "signals": ["input", "output"]},
            {"kind": "summary", "path": "summary.json"},
        ],
        "expectations": [
            {"metric": "delay.peak_advance", "target": 0.0, "abs_tol": 1e-9},
            {"metric": "delay.distortion_rms", "max": 1e-9},
        ],
    }


def _builtin_fig2() -> dict:
    return {
        "schema_version": 1,
        "name": "fig2_rlc_advance",
        "description": (
            "25 ms-FWHM Gaussian through the canonical three-stage NGD compensator: "
            "output peak advanced by 12.1 ms with low distortion."
        ),
        "blocks": {"compensator": {"kind": "pulse_advance_compensator"}},
        "signals": {"input": dict(_FIG2_SIGNAL)},
        "pipeline": [
            {"op": "filter", "block": "compensator", "input": "input", "output": "output"},
            {"op": "peak_advance", "input": "input", "output": "output", "report": "delay"},
            {
                "op": "negative_time_energy",
                "block": "compensator",
                "count": 32768,
                "dt": 5e-5,
                "report": "causality",
            },
        ],
        "outputs": [
            {"kind": "csv", "path": "traces.csv", "signals": ["input", "output"]},
            {"kind": "svg", "path": "traces.svg", "signals": ["input", "output"]},
            {"kind": "summary", "path": "summary.json"},
        ],
        "expectations": [
            {"metric": "delay.peak_advance", "target": 0.0121, "rel_tol": 0.05},
            {"metric": "delay.distortion_rms", "max": 0.05},
            {"metric": "causality.negative_energy_fraction", "max": 1e-6},
        ],
    }


def _builtin_fig3() -> dict:
    return {
        "schema_version": 1,
        "name": "fig3_causality",
        "description": (
            "Pulse truncated at its peak through the same compensator: the peak of the "
            "full pulse is advanced but the truncation front is not."
        ),
        "blocks": {"compensator": {"kind": "pulse_advance_compensator"}},
        "signals": {"input": dict(_FIG2_SIGNAL)},
        "pipeline": [
            {"op": "filter", "block": "compensator", "input": "input", "output": "output"},
            {"op": "peak_advance", "input": "input", "output": "output", "report": "delay"},
            {
                # Finer grid than the peak measurement: the front detector
                # must resolve the loop's fast transient (Nyquist above the
                # amplifier gain-bandwidth), or aliasing smears the cut.
                "op": "causality_front",
                "block": "compensator",
                "center": 0.35,
                "fwhm": 0.025,
                "t0": 0.05,
                "dt": 2e-6,
                "count": 262144,
                "report": "front",
            },
        ],
        "outputs": [{"kind": "summary", "path": "summary.json"}],
        "expectations": [
            {"metric": "delay.peak_advance", "min": 0.00968},  # 0.8 x 12.1 ms
            # one sample is 2e-6 s; the margin absorbs float rounding in t0 + k*dt
            {"metric": "front.front_advance", "target": 0.0, "abs_tol": 2.5e-6},
            {"metric": "front.pre_cut_match_rms", "max": 0.01},
        ],
    }


_FIG5_RC = 1.0e-3  # seconds; R = 1 kOhm, C = 1 uF


def _builtin_fig5() -> dict:
    rc = _FIG5_RC
    return {
        "schema_version": 1,
        "name": "fig5_rc_cancellation",
        "description": (
            "Square wave through a bare RC interconnect versus the same RC followed by a "
            "matched-feedback compensator: the compensated edge is at least 5x faster."
        ),
        "blocks": {
            "line": {"kind": "rc_lowpass", "resistance": 1000.0, "capacitance": 1.0e-6},
            "compensator": {
                "kind": "ngd_compensator",
                "feedback": {"kind": "rc_lowpass", "resistance": 1000.0, "capacitance": 1.0e-6},
                "dc_gain": 316.23,
                "pole_frequency": 1.0e6 / 316.23,
            },
            "link": {"kind": "compensated_link", "passive": "line", "compensator": "compensator"},
        },
        "signals": {
            "input": {
                "kind": "square",
                "period": 40 * rc,
                "duty": 0.5,
                "low": 0.0,
                "high": 1.0,
                "t0": -10 * rc,
                "dt": rc / 200.0,
                "count": 16384,
            }
        },
        "pipeline": [
            {"op": "filter", "block": "line", "input": "input", "output": "uncompensated"},
            {"op": "filter", "block": "link", "input": "input", "output": "compensated"},
            {
                "op": "rise_time",
                "input": "uncompensated",
                "low": 0.0,
                "high": 1.0,
                "window": [0.0, 15 * rc],
                "report": "rise_uncompensated",
            },
            {
                "op": "rise_time",
                "input": "compensated",
                "low": 0.0,
                "high": 1.0,
                "window": [0.0, 15 * rc],
                "report": "rise_compensated",
            },
            {
                "op": "settle_check",
                "input": "compensated",
                "level": 1.0,
                "swing": 1.0,
                "window": [10 * rc, 19 * rc],
                "report": "settle_high",
            },
            {
                "op": "settle_check",
                "input": "compensated",
                "level": 0.0,
                "swing": 1.0,
                "window": [30 * rc, 39 * rc],
                "report": "settle_low",
            },
        ],
        "outputs": [
            {
                "kind": "csv",
                "path": "traces.csv",
                "signals": ["input", "uncompensated", "compensated"],
            },
            {
                "kind": "svg",
                "path": "traces.svg",
                "signals": ["input", "uncompensated", "compensated"],
            },
            {"kind": "summary", "path": "summary.json"},
        ],
        "expectations": [
            {"metric": "rise_uncompensated.rise_time", "target": 2.197 * rc, "rel_tol": 0.05},
            {"metric": "rise_compensated.rise_time", "max": 0.2 * 2.197 * rc},
            {"metric": "settle_high.settled", "equals": True},
            {"metric": "settle_low.settled", "equals": True},
        ],
    }


def _builtin_golden_rule() -> dict:
    return {
        "schema_version": 1,
        "name": "golden_rule_sweep",
        "description": (
            "Residual of the equal-input-voltages approximation versus loop gain: "
            "max residual scales as 1/(dc gain) for unity feedback."
        ),
        "blocks": {
            "amp": {"kind": "gain", "value": 100.0},
            "unity": {"kind": "identity"},
        },
        "pipeline": [
            {
                "op": "golden_rule",
                "forward": "amp",
                "feedback": "unity",
                "grid": {"omega_min": 0.0, "omega_max": 1.0e4, "count": 256},
                "report": "golden",
            },
            {
                "op": "inversion_error",
                "forward": "amp",
                "feedback": "unity",
                "grid": {"omega_min": 0.0, "omega_max": 1.0e4, "count": 256},
                "report": "inversion",
            },
        ],
        "outputs": [
            {"kind": "csv_spectrum", "path": "residual.csv", "report": "golden"},
            {"kind": "summary", "path": "summary.json"},
        ],
        "expectations": [
            {"metric": "golden.max_residual", "target": 1.0e-2, "rel_tol": 0.1},
            {"metric": "inversion.max_error", "target": 1.0e-2, "rel_tol": 0.1},
        ],
    }


def _builtin_bode_check() -> dict:
    grid = {"omega_min": 0.0, "omega_max": 2.0e5, "count": 32768}
    return {
        "schema_version": 1,
        "name": "bode_check",
        "description": (
            "Minimum-phase reconstruction from magnitude for RC and RLC blocks, and the "
            "all-pass exclusion: a pure delay reconstructs to zero phase."
        ),
        "blocks": {
            "rc": {"kind": "rc_lowpass", "resistance": 1000.0, "capacitance": 1.0e-6},
            "rlc": {
                "kind": "rlc_bandpass",
                "resistance": 1000.0,
                "inductance": 0.1,
                "capacitance": 1.0e-6,
            },
            "delay": {"kind": "pure_delay", "tau_d": 1.0e-3},
        },
        "pipeline": [
            {
                "op": "bode_check",
                "block": "rc",
                "grid": grid,
                "band": [300.0, 1.0e4],
                "report": "rc_bode",
            },
            {
                "op": "bode_check",
                "block": "rlc",
                "grid": grid,
                "band": [300.0, 1.0e4],
                "report": "rlc_bode",
            },
            {
                "op": "bode_check",
                "block": "delay",
                "grid": grid,
                "band": [300.0, 1.0e4],
                "report": "delay_bode",
            },
            {
                "op": "spectrum",
                "block": "rlc",
                "grid": {"omega_min": 100.0, "omega_max": 1.0e5, "count": 2048,
                         "spacing": "logarithmic"},
                "report": "rlc_spectrum",
            },
        ],
        "outputs": [
            {"kind": "csv_spectrum", "path": "rlc_spectrum.csv", "report": "rlc_spectrum"},
            {"kind": "svg_spectrum", "path": "rlc_bode.svg", "report": "rlc_spectrum"},
            {"kind": "summary", "path": "summary.json"},
        ],
        "expectations": [
            {"metric": "rc_bode.max_band_error", "max": 0.02},
            {"metric": "rlc_bode.max_band_error", "max": 0.02},
            {"metric": "delay_bode.max_reconstructed_abs", "max": 0.02},
        ],
    }


def _builtin_energy_report() -> dict:
    return {
        "schema_version": 1,
        "name": "energy_report",
        "description": (
            "Load power of the advanced pulse: the power peak coincides sample-exactly "
            "with the voltage peak, so the advance carries over to delivered energy."
        ),
        "blocks": {"compensator": {"kind": "pulse_advance_compensator"}},
        "signals": {"input": dict(_FIG2_SIGNAL)},
        "pipeline": [
            {"op": "filter", "block": "compensator", "input": "input", "output": "output"},
            {"op": "peak_advance", "input": "input", "output": "output", "report": "delay"},
            {
                "op": "load_power",
                "input": "output",
                "r_load": 50.0,
                "power_output": "power",
                "report": "energy",
            },
        ],
        "outputs": [
            {"kind": "csv", "path": "power.csv", "signals": ["output", "power"]},
            {"kind": "summary", "path": "summary.json"},
        ],
        "expectations": [
            {"metric": "energy.indices_match", "equals": True},
            {"metric": "delay.peak_advance", "target": 0.0121, "rel_tol": 0.05},
        ],
    }


_BUILTIN_FACTORIES = {
    "fig2_rlc_advance": _builtin_fig2,
    "fig3_causality": _builtin_fig3,
    "fig5_rc_cancellation": _builtin_fig5,
    "golden_rule_sweep": _builtin_golden_rule,
    "bode_check": _builtin_bode_check,
    "energy_report": _builtin_energy_report,
    "identity_smoke": _builtin_identity_smoke,
}


def builtin_config(name: str) -> dict:
    if name not in _BUILTIN_FACTORIES:
        raise ConfigError("name", f"unknown built-in scenario {name!r}")
    return _BUILTIN_FACTORIES[name]()


def list_scenarios() -> list[tuple[str, str]]:
    """Stable-ordered (name, description) pairs for every built-in scenario."""
    return [
        (name, factory()["description"]) for name, factory in _BUILTIN_FACTORIES.items()
    ]
