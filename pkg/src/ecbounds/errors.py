"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PrecisionError(ArithmeticError):
    """A requested value cannot be computed to the configured accuracy."""


class ResourceError(RuntimeError):
    """A computation would exceed a configured size or iteration cap."""


class ValidationError(ValueError):
    """A matrix or ensemble fails a structural check (hermiticity, trace, ...)."""
