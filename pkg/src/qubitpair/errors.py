"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the domain of the operation (NaN, out-of-range weight, ...)."""


class InvariantError(ValueError):
    """An object handed to an operation violates a structural invariant (norm, unitarity, ...)."""


class UnsupportedFormError(NotImplementedError):
    """No closed form exists for the requested case; use the statevector oracle instead."""
