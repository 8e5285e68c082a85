"""Exception types shared across the package."""


class SpinDetectError(Exception):
    """Base class for all spindetect errors."""


class DomainError(SpinDetectError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DegenerateInputError(SpinDetectError, ValueError):
    """Input is structurally valid but makes the operation meaningless."""


class InfeasibleSampleSizeError(SpinDetectError):
    """The required sample size exceeds the configured hard cap."""

    def __init__(self, cap: int, message: str | None = None):
        self.cap = cap
        super().__init__(message or f"required sample size exceeds the cap of {cap}")


class NoRootError(SpinDetectError):
    """A bracketed root search found no sign change."""


class StreamExhaustedError(SpinDetectError):
    """An increment stream ended before the sequential test could decide."""


class PredictionUndefinedError(SpinDetectError):
    """The Brownian drift points away from the boundary being extrapolated to."""


class EstimationFailedError(SpinDetectError):
    """A Monte Carlo estimate could not be formed from the completed trials."""


class ConfigError(SpinDetectError):
    """A CLI configuration file failed to parse or validate."""
