class DomainError(ValueError):
    """Argument outside the domain of an operation."""


class CapacityError(MemoryError):
    """Requested dense representation exceeds the supported qubit count."""


class DegenerateError(ValueError):
    """Construction is undefined at the requested point (zero norm, collinear inputs, ...)."""
