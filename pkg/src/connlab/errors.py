"""Exception types shared across the library."""


class ConfigError(ValueError):
    """An algorithm specification or parameter combination is invalid."""


class MalformedInputError(ValueError):
    """A graph file or edge list violates its format contract."""


class VerificationError(AssertionError):
    """A correctness check failed (oracle mismatch, forest violation, ...)."""
