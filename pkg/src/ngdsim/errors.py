"""Exception types shared across the simulator."""


class SimulationError(Exception):
    """Base class for all ngdsim errors."""


class InvalidParameter(SimulationError):
    """A block or signal parameter is out of its valid range."""


class PoleAtFrequency(SimulationError):
    """A transfer function denominator is exactly zero at a requested frequency."""

    def __init__(self, omega, grid_index=None):
        self.omega = omega
        self.grid_index = grid_index
        where = f"omega={omega!r}"
        if grid_index is not None:
            where += f" (grid index {grid_index})"
        super().__init__(f"transfer function has a pole at {where}")


class GridTooCoarse(SimulationError):
    """Adjacent samples differ too much for the grid to resolve the curve."""


class GridTooNarrow(SimulationError):
    """The frequency grid does not extend far enough past the band of interest."""


class NonpositiveMagnitude(SimulationError):
    """Minimum-phase reconstruction needs a strictly positive magnitude."""


class UnstableLoop(SimulationError):
    """The closed feedback loop fails the Nyquist stability probe."""


class PeakOnBoundary(SimulationError):
    """A signal maximum sits on the first or last sample; peak timing is undefined."""


class ThresholdNotCrossed(SimulationError):
    """A rise-time threshold level is never crossed inside the window."""


class WraparoundContamination(SimulationError):
    """Circular-convolution energy wrapped into the analysis window."""


class ConfigError(SimulationError):
    """A scenario configuration is malformed; carries the offending field path."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")
