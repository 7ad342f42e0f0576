"""Exception hierarchy shared across the package.

Construction-time failures (profiles, initial data) are kept separate from
runtime failures (positivity loss, blow-up) so that drivers can map them to
distinct exit codes.
"""


class InflowShockError(Exception):
    """Base class for all package errors."""


class DomainError(InflowShockError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DegenerateShockError(DomainError):
    """Requested shock strength is zero (or below the supported minimum)."""


class ConstructionError(InflowShockError, RuntimeError):
    """A profile or initial-data construction stage failed."""


class IntegrationError(ConstructionError):
    """Adaptive ODE integration or a quadrature did not converge."""


class InconsistentDataError(ConstructionError):
    """Supplied states/fields violate a consistency requirement."""


class ResolutionError(ConstructionError):
    """The grid is too coarse to resolve the requested fine scale."""


class CompatibilityError(ConstructionError):
    """Initial data cannot be reconciled with the boundary values."""


class InadmissibleDataError(ConstructionError):
    """Assembled initial data violate positivity or stated bounds."""


class PositivityError(InflowShockError, RuntimeError):
    """A time step produced a non-positive specific volume."""

    def __init__(self, message: str, t: float | None = None):
        super().__init__(message)
        self.t = t


class BlowupError(InflowShockError, RuntimeError):
    """NaN/Inf detected during time stepping."""

    def __init__(self, message: str, t: float | None = None):
        super().__init__(message)
        self.t = t


class SimulationTimeout(InflowShockError, RuntimeError):
    """Wall-clock budget exceeded; partial results are attached."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class ConfigError(InflowShockError, ValueError):
    """A run configuration failed validation."""
