"""Exception types shared across the simulator."""


class SledOamError(Exception):
    """Base class for all simulator errors."""


class DomainError(SledOamError, ValueError):
    """An input lies outside the physical domain of an operation."""


class ContractError(SledOamError, ValueError):
    """A numerical object violates a structural contract (Hermiticity, trace, basis)."""


class ConvergenceError(SledOamError, RuntimeError):
    """A quadrature or iteration failed its convergence check.

    Carries the competing estimates so callers can inspect how far apart they are.
    """

    def __init__(self, message: str, coarse=None, refined=None):
        super().__init__(message)
        self.coarse = coarse
        self.refined = refined


class EmptySectorError(SledOamError, ValueError):
    """No basis pair satisfies the requested angular-momentum selection rule."""


class DegenerateMixtureError(SledOamError, ValueError):
    """Mixture weights or component traces vanish; no state can be formed."""


class ConfigError(SledOamError, ValueError):
    """A run configuration failed to parse or validate."""
