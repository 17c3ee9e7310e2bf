"""Exception types shared across the package."""


class HelmopError(Exception):
    """Base class for all package-specific errors."""


class DomainRangeError(HelmopError, ValueError):
    """An argument lies outside the validated range of a special function."""


class NumericalError(HelmopError, RuntimeError):
    """A numerical procedure failed (factorization breakdown, SVD stall, ...)."""


class FactorizationError(NumericalError):
    """Cholesky factorization broke down.

    Attributes
    ----------
    index : int
        0-based index of the offending pivot (leading minor), when known.
    """

    def __init__(self, message, index=-1):
        super().__init__(message)
        self.index = index


class BasisConditionError(NumericalError):
    """A normalization value |J_n(k*rho)| fell below the eigenvalue-proximity
    threshold, signalling that k^2 sits numerically on a Dirichlet eigenvalue
    of the reference disk."""

    def __init__(self, message, orders=()):
        super().__init__(message)
        self.orders = tuple(orders)


class ConfigError(HelmopError, ValueError):
    """A run configuration failed validation."""
