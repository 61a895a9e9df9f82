"""Exception hierarchy for poissonnet.

All exceptions inherit from PoissonNetError, allowing callers to catch
all poissonnet errors with a single except clause if desired.
"""

from __future__ import annotations


class PoissonNetError(Exception):
    """Base exception for all poissonnet errors."""

    def __init__(self, message: str) -> None:
        self.message = message
        super().__init__(message)


# =============================================================================
# Configuration Errors
# =============================================================================


class ConfigError(PoissonNetError):
    """Error in configuration parsing or validation."""


class ConfigNotFoundError(ConfigError):
    """Configuration file not found."""


class ConfigValidationError(ConfigError):
    """Configuration values failed validation."""


# =============================================================================
# Model Errors
# =============================================================================


class ModelError(PoissonNetError):
    """Error in the Gamma-Poisson model or its closed forms."""


class InvalidSampleSizesError(ModelError):
    """Sample sizes are empty or contain a non-positive entry."""


class DomainError(ModelError):
    """An argument lies outside the domain of a closed form."""

    def __init__(self, name: str, value: float, requirement: str) -> None:
        self.name = name
        self.value = value
        super().__init__(f"{name}={value!r} is outside the domain ({requirement})")


class DegenerateDataError(ModelError):
    """The data carry no information for the requested estimate."""


class CountOverflowError(ModelError):
    """A count sum does not fit the 64-bit integer range."""


# =============================================================================
# Graph Errors
# =============================================================================


class GraphError(PoissonNetError):
    """Error related to communication schedules or weight matrices."""


class ScheduleFormatError(GraphError):
    """A scripted schedule is malformed."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DimensionMismatchError(GraphError):
    """Array shapes do not agree with the node count."""

    def __init__(self, expected: int, actual: int, what: str = "matrix") -> None:
        self.expected = expected
        self.actual = actual
        super().__init__(f"{what} has dimension {actual}, expected {expected}")


# =============================================================================
# Experiment Errors
# =============================================================================


class ExperimentError(PoissonNetError):
    """Error while running an experiment pipeline."""


class UnknownFigureError(ExperimentError):
    """Requested figure id is not known."""

    def __init__(self, which: str, known: tuple[str, ...]) -> None:
        self.which = which
        super().__init__(f"Unknown figure '{which}' (expected one of: {', '.join(known)})")


class ArtifactError(ExperimentError):
    """Failed to write an output artifact."""
