"""Exception types raised by discordlab."""


class DiscordLabError(Exception):
    """Base class for all library errors."""


class DimensionError(DiscordLabError, ValueError):
    """Operand dimensions are inconsistent."""


class InvalidStateError(DiscordLabError, ValueError):
    """A matrix fails the density-matrix invariants."""


class InvalidParameterError(DiscordLabError, ValueError):
    """A configuration or physical parameter is out of range."""


class TruncationError(DiscordLabError, ValueError):
    """A Fock-space cutoff is too small for the requested state."""


class UnphysicalCovarianceError(DiscordLabError, ValueError):
    """A covariance matrix violates the uncertainty principle."""


class OptimizerError(DiscordLabError, RuntimeError):
    """No optimizer start converged."""
