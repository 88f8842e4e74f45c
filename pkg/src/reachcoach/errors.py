class ValidationError(ValueError):
    """Raised when an input violates a documented invariant."""


class ConfigError(ValidationError):
    """Raised for unusable configuration (unknown categories, bad keys)."""
