"""Exception types shared across the package."""


class PlaError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(PlaError, ValueError):
    """Raised when an input violates a documented precondition."""


class NumericalFailureError(PlaError, RuntimeError):
    """Raised when a numerical routine fails to produce a valid result."""
