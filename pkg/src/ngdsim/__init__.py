"""Simulator and analysis toolkit for negative-group-delay op-amp circuits."""

from .analysis import (
    BodeReport,
    DelayCancellationReport,
    FrontReport,
    GoldenRuleReport,
    bode_consistency_report,
    causality_front_test,
    delay_cancellation_report,
    golden_rule_residual,
    inversion_error,
    minimum_phase_reconstruction,
)
from .blocks import (
    CompensatorSpec,
    GainFeedbackReport,
    OpAmpModel,
    StabilityReport,
    gain_feedback_check,
    make_compensated_link,
    make_ngd_compensator,
    opamp_block,
    pulse_advance_compensator,
    rc_lowpass_block,
    rlc_bandpass_block,
    rlc_lowpass_block,
    stability_probe,
)
from .errors import (
    ConfigError,
    GridTooCoarse,
    GridTooNarrow,
    InvalidParameter,
    NonpositiveMagnitude,
    PeakOnBoundary,
    PoleAtFrequency,
    SimulationError,
    ThresholdNotCrossed,
    UnstableLoop,
    WraparoundContamination,
)
from .lti import (
    FeedbackLoop,
    FrequencyGrid,
    Gain,
    Identity,
    PureDelay,
    Rational,
    Series,
    SpectrumAnalysis,
    TransferBlock,
    compose_feedback,
    evaluate,
    evaluate_grid,
    group_delay_curve,
    impulse_response,
    unwrap_phase,
)
from .propagation import (
    DelayReport,
    EnergyReport,
    apply_filter,
    detect_discontinuity,
    discontinuity_threshold,
    load_power,
    measure_peak_advance,
    rise_time_10_90,
)
from .scenarios import RunSummary, builtin_config, list_scenarios, run_scenario, sweep
from .signals import (
    GaussianPulseSpec,
    SampledSignal,
    SquareWaveSpec,
    gaussian_pulse,
    square_wave,
    truncate_at_max,
)

__version__ = "0.1.0"
