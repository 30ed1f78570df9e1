"""
Exception Definitions - Custom exceptions for linsess
=====================================================

This module defines all custom exceptions used throughout the toolkit,
providing clear error handling and meaningful error messages for the
parser, the type checker and the reduction engine.
"""

from typing import Any, List, Optional, Tuple


class LinsessError(Exception):
    """
    Base exception for all linsess errors.

    All custom exceptions in this package inherit from this base class,
    allowing callers to catch every toolkit-specific error at once.

    Attributes:
        message (str): Human-readable error description
        details (dict): Additional error details for debugging
    """

    def __init__(self, message: str, details: dict = None):
        """
        Initialize the exception.

        Args:
            message: Human-readable error description
            details: Optional dictionary with additional error context
        """
        self.message = message
        self.details = details or {}
        super().__init__(self.message)

    def __str__(self) -> str:
        """Return formatted error message with details if present."""
        if self.details:
            return f"{self.message} | Details: {self.details}"
        return self.message


class ConfigError(LinsessError):
    """
    Configuration-related errors.

    Raised when there are issues with:
    - Unreadable or malformed configuration files
    - Invalid configuration values
    - Environment variable conversion failures
    """
    pass


class ParseError(LinsessError):
    """
    Source text could not be turned into a program.

    Carries every diagnostic collected before giving up (at most one per
    definition, see the parser).

    Attributes:
        diagnostics (list): Diagnostic records with span, code and message
    """

    def __init__(self, message: str, diagnostics: Optional[List[Any]] = None, details: dict = None):
        self.diagnostics = list(diagnostics or [])
        super().__init__(message, details)

    @property
    def codes(self) -> List[str]:
        """Stable codes of all diagnostics, in source order."""
        return [d.code for d in self.diagnostics]


class TypeCheckError(LinsessError):
    """
    A typing judgement was rejected.

    Every rejection carries exactly one primary code:
    E-DUAL, E-SPLIT, E-FORMULA, E-UPDATE, E-WF, E-UNQUAL,
    E-NOTSESSION or E-MISMATCH.

    Attributes:
        code (str): Primary error code
        span (tuple): Byte range of the offending process node, if known
        explanation (str): What the rule needed and did not find
        context_slice (list): Printed context entries relevant to the failure
    """

    CODES = (
        "E-DUAL",
        "E-SPLIT",
        "E-FORMULA",
        "E-UPDATE",
        "E-WF",
        "E-UNQUAL",
        "E-NOTSESSION",
        "E-MISMATCH",
    )

    def __init__(
        self,
        code: str,
        explanation: str,
        span: Optional[Tuple[int, int]] = None,
        context_slice: Optional[List[str]] = None,
    ):
        if code not in self.CODES:
            raise ValueError(f"unknown type error code {code}")
        self.code = code
        self.explanation = explanation
        self.span = span
        self.context_slice = list(context_slice or [])
        details = {"code": code}
        if span is not None:
            details["span"] = list(span)
        if self.context_slice:
            details["context"] = self.context_slice
        super().__init__(f"{code}: {explanation}", details)

    def to_dict(self) -> dict:
        """Structured rendering for machine-readable reports."""
        return {
            "code": self.code,
            "message": self.explanation,
            "span": list(self.span) if self.span is not None else None,
            "context": self.context_slice,
        }


class NotRecursiveError(LinsessError):
    """Raised when a one-step unfolding is requested on a non-recursive type."""
    pass


class FuelExhausted(LinsessError):
    """
    The reference checker ran out of derivation-search fuel.

    The verdict is unknown; callers treat it as "no answer".
    """
    pass


class SortError(LinsessError):
    """
    A value that is not a name was substituted into a channel-subject position.

    Only ill-typed processes can reach this; the reduction engine treats the
    offending communication as disabled.
    """
    pass
