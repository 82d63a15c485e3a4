"""Exception types raised across the library."""


class WeylExtError(Exception):
    """Base class for library errors."""


class DimensionError(WeylExtError, ValueError):
    """Grid or array shapes do not agree."""


class ShapeError(WeylExtError, ValueError):
    """A matrix has the wrong shape (non-square, odd size, ...)."""


class ContractError(WeylExtError):
    """An input violates a numerical precondition (e.g. too non-Hermitian)."""


class DomainError(WeylExtError):
    """The truncated domain is too small for the requested functions."""


class NotFreeError(WeylExtError):
    """The symplectic matrix has no free generating form (det B ~ 0)."""


class ConventionError(WeylExtError):
    """Grids are not paired the way the transform expects."""


class UnsupportedError(WeylExtError):
    """The requested input is outside what the library implements."""


class DegenerateError(WeylExtError):
    """A required vector is zero."""


class PreconditionError(WeylExtError):
    """A diagnostic precondition is not met (e.g. no kernel vector)."""


class ConfigError(WeylExtError):
    """A CLI configuration document is malformed."""
