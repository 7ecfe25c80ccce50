"""Exception and warning types raised across the package."""


class RBComError(Exception):
    """Base class for all package errors."""


class DomainError(RBComError, ValueError):
    """An argument lies outside the domain of a model equation."""


class ConfigError(RBComError, ValueError):
    """Invalid or malformed system configuration.

    ``field`` names the offending parameter (dotted path) when known.
    """

    def __init__(self, message, field=None):
        self.field = field
        self.reason = message
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)


class ConvergenceError(RBComError, RuntimeError):
    """Root finder failed to converge; carries the last bracket."""

    def __init__(self, message, bracket=None, iterations=None):
        self.bracket = bracket
        self.iterations = iterations
        if bracket is not None:
            message = f"{message} (bracket=[{bracket[0]!r}, {bracket[1]!r}], iterations={iterations})"
        super().__init__(message)


class AnalysisError(RBComError):
    """Post-processing could not extract the requested quantity."""


class BelowThresholdWarning(UserWarning):
    """Pump drive current below the lasing threshold; output clamped to zero."""


class ModulationWarning(UserWarning):
    """Drive signal swings below threshold, so the modulation is clipped."""


class QuasiStaticWarning(UserWarning):
    """The diffusion-capacitance model is used outside omega*tau << 1."""


class BandEdgeWarning(UserWarning):
    """A half-power edge was not resolved inside the frequency grid."""


def require(condition, field, message):
    """Raise :class:`ConfigError` for ``field`` unless ``condition`` holds."""
    if not condition:
        raise ConfigError(message, field=field)
