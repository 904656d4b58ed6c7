"""Exception types shared across the package."""

from __future__ import annotations


class ContractViolation(ValueError):
    """A caller broke a documented precondition (bad id, unsorted input, ...)."""


class TopologyParseError(ValueError):
    def __init__(self, lineno: int, message: str) -> None:
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno
        self.message = message


class LogFormatError(ValueError):
    """Unsupported log format requested."""


class OracleRefusal(ValueError):
    """Instance too large for exhaustive enumeration."""
