"""Exception types shared across the package."""


class CapabilityError(RuntimeError):
    """An operation exceeds a configured capability limit (size cap, terminal
    cap, enumeration budget).  The message states the limit that was hit."""


class InfeasibleSizeError(ValueError):
    """A growth stage cannot reach its target size with the vertices available."""


class ConfigError(ValueError):
    """An experiment or CLI configuration is invalid.  Mapped to exit code 2."""
