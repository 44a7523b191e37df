"""Shared error and diagnostic types."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .syntax import Loc


class SpecCheckError(Exception):
    """Base for all package errors."""


class LexError(SpecCheckError):
    def __init__(self, loc: Loc, message: str):
        super().__init__(f"lex error at {loc}: {message}")
        self.loc = loc
        self.message = message


class ParseError(SpecCheckError):
    def __init__(self, loc: Optional[Loc], message: str, expected=None, found=None):
        where = f" at {loc}" if loc else ""
        super().__init__(f"parse error{where}: {message}")
        self.loc = loc
        self.message = message
        self.expected = expected
        self.found = found


class ValidationFailed(SpecCheckError):
    """Raised when a consumer requires an error-free program."""

    def __init__(self, diagnostics):
        errs = [d for d in diagnostics if d.severity == "error"]
        super().__init__("; ".join(str(d) for d in errs) or "validation failed")
        self.diagnostics = diagnostics


class UnboundVariable(SpecCheckError):
    """Evaluation met a name the validator should have rejected; a bug signal,
    not an Undefined outcome."""

    def __init__(self, name, loc=None):
        super().__init__(f"unbound variable {name!r}")
        self.name = name
        self.loc = loc


class InvalidKind(SpecCheckError):
    pass


class InconsistentLabels(SpecCheckError):
    def __init__(self, input, output, kinds):
        from .syntax import format_valuation
        super().__init__(
            f"behavior {format_valuation(input)} -> {format_valuation(output)} "
            f"labeled both {' and '.join(sorted(kinds))}")
        self.input = input
        self.output = output
        self.kinds = kinds


class DomainTooLarge(SpecCheckError):
    def __init__(self, count, cap):
        super().__init__(f"domain enumerates {count} behaviors, cap is {cap}")
        self.count = count
        self.cap = cap


class DomainError(SpecCheckError):
    pass


class VersionMismatch(SpecCheckError):
    def __init__(self, found, supported):
        super().__init__(f"session file version {found}, supported {supported}")
        self.found = found
        self.supported = supported


class SessionStateError(SpecCheckError):
    """Stepping past a pending oracle query, answering with none pending, etc."""


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    message: str
    loc: Optional[Loc] = None

    def __str__(self):
        where = f" at {self.loc}" if self.loc else ""
        return f"{self.severity}{where}: {self.message}"

    def to_json(self):
        return {
            "severity": self.severity,
            "message": self.message,
            "loc": {"line": self.loc.line, "col": self.loc.col} if self.loc else None,
        }
