"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid configuration: bad dimensions, out-of-range parameters, unknown keys."""


class InvariantViolation(AssertionError):
    """An internal numerical invariant (normalization, unitarity) was broken."""
