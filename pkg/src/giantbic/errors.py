"""Exception hierarchy.

Every error raised deliberately by the package derives from
:class:`GiantBicError`, so callers (the CLI in particular) can map error
families onto exit codes without catching unrelated exceptions.
"""


class GiantBicError(Exception):
    """Base class for all package errors."""


class InvalidDiscretizationError(GiantBicError, ValueError):
    """Momentum grid cannot be built (e.g. odd number of modes)."""


class InvalidParameterError(GiantBicError, ValueError):
    """Model parameters or geometry violate their invariants."""


class OutOfBandError(GiantBicError, ValueError):
    """A probe energy lies outside the open band, so no propagating mode exists."""


class InvalidStateError(GiantBicError, ValueError):
    """Density matrix or amplitudes are not a valid (sub)normalized state."""


class InvalidGridError(GiantBicError, ValueError):
    """Time grid for an integrator is malformed."""


class AlignmentError(GiantBicError, ValueError):
    """Two trajectories do not share the same time grid."""


class NumericalBackendError(GiantBicError, RuntimeError):
    """The linear-algebra backend failed (eigensolver did not converge, ...)."""


class ConfigError(GiantBicError, ValueError):
    """Configuration file or override is malformed."""
