"""Shared error types mapped to CLI exit codes (config 2, numeric 3)."""


class ConfigError(ValueError):
    """Bad experiment config; carries the offending field path."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class NumericFault(RuntimeError):
    """Non-finite value reached during evaluation or training."""


class ConvergenceError(RuntimeError):
    """Iterative solver exhausted its budget before reaching tolerance."""
