"""Exception hierarchy shared by all trialbf modules."""


class TrialBFError(Exception):
    """Base class for every error raised by trialbf."""


class DomainError(TrialBFError, ValueError):
    """An argument lies outside the domain of the operation."""


class UnusableSummaryError(TrialBFError, ValueError):
    """A published summary carries neither a CI nor a p-value."""


class CannotRecoverError(TrialBFError, ValueError):
    """The standard error cannot be recovered from the given inputs."""


class UnsupportedPointPriorError(TrialBFError, ValueError):
    """A point-mass prior sits outside (or on the edge of) its truncation support."""


class ConfigurationError(TrialBFError, ValueError):
    """A grid, region or run configuration is empty or inconsistent."""


class OracleFailureError(TrialBFError, RuntimeError):
    """Numerical integration in the verification oracle did not converge."""
