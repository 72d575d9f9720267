"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the mathematical domain of the operation."""


class IntegrityError(RuntimeError):
    """An internal exactness assertion failed (signals an interpretation bug)."""
