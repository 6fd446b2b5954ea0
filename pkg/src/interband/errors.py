class ConfigError(ValueError):
    """Invalid or incomplete run configuration."""


class CapacityError(RuntimeError):
    """A requested basis or dense operation exceeds the configured size limit."""


class NumericalError(RuntimeError):
    """Integration or analysis could not produce a trustworthy result."""
