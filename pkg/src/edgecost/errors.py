"""Exception types shared by the whole package.

The CLI maps each family onto a distinct exit code, so library code should
raise the most specific class that applies.
"""

from __future__ import annotations


class EdgeCostError(Exception):
    """Base class for every error raised on purpose by this package."""


class ConfigError(EdgeCostError, ValueError):
    """A configuration value or file violates its schema or invariants."""

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}" if field else message)


class UnknownPresetError(EdgeCostError, LookupError):
    def __init__(self, kind: str, name: str, available: list[str]):
        self.kind = kind
        self.name = name
        self.available = available
        super().__init__(f"unknown {kind} preset {name!r}; available: {', '.join(available)}")

    def __str__(self) -> str:
        # LookupError would otherwise repr() the message.
        return self.args[0]


class InternalInvariantError(EdgeCostError, AssertionError):
    """A computed result failed one of its own consistency checks."""
