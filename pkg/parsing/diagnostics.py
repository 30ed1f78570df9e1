"""
Diagnostics reported by the parser.

Spans are byte offsets into the UTF-8 encoded source, end exclusive.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Tuple


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


CODES = (
    "E-SYNTAX",
    "E-DUPLICATE",
    "E-UNKNOWN",
    "E-CONTRACT",
    "E-RECREF",
    "E-ARITY",
    "E-CYCLE",
)


@dataclass(frozen=True)
class Diagnostic:
    """
    One parser finding.

    Attributes:
        severity: error or warning
        span: (start, end) byte offsets
        code: Stable identifier (E-SYNTAX, E-CONTRACT, ...)
        message: Human-readable text
    """
    severity: Severity
    span: Tuple[int, int]
    code: str
    message: str

    def to_dict(self) -> Dict[str, Any]:
        return {
            "severity": self.severity.value,
            "span": list(self.span),
            "code": self.code,
            "message": self.message,
        }

    def __str__(self) -> str:
        return f"{self.span[0]}-{self.span[1]}: {self.severity.value} {self.code}: {self.message}"


class SourceOffsets:
    """Converts character positions to byte offsets and clamps spans to the source."""

    def __init__(self, source: str):
        self.source = source
        self.ascii = source.isascii()
        self.size = len(source.encode("utf-8"))

    def byte(self, pos: int) -> int:
        pos = max(0, min(pos, len(self.source)))
        if self.ascii:
            return pos
        return len(self.source[:pos].encode("utf-8"))

    def span(self, start: int, end: int) -> Tuple[int, int]:
        """Non-empty span inside the source (empty only for an empty source)."""
        if self.size == 0:
            return (0, 0)
        lo = min(self.byte(start), self.size - 1)
        hi = max(self.byte(end), lo + 1)
        return (lo, min(hi, self.size))


def error(span: Tuple[int, int], code: str, message: str) -> Diagnostic:
    return Diagnostic(Severity.ERROR, span, code, message)
