"""
Services Module - Command orchestration for linsess
===================================================

This module provides the commands behind the CLI:
- cmd_check: Type checking, optionally against a context file or erased
- cmd_reduce: Reduction runs with traces and verdicts
- cmd_safety: Assertion safety within an unfolding budget
- cmd_canon: Canonical forms
"""

from .commands import (
    COMMANDS,
    EXIT_OK,
    EXIT_PARSE_ERROR,
    EXIT_STEP_LIMIT,
    EXIT_STUCK,
    EXIT_TYPE_ERROR,
    OPEN_CONTEXT_WARNING,
    Report,
    cmd_canon,
    cmd_check,
    cmd_reduce,
    cmd_safety,
    load_expectations,
)

__all__ = [
    "COMMANDS",
    "EXIT_OK",
    "EXIT_PARSE_ERROR",
    "EXIT_STEP_LIMIT",
    "EXIT_STUCK",
    "EXIT_TYPE_ERROR",
    "OPEN_CONTEXT_WARNING",
    "Report",
    "cmd_canon",
    "cmd_check",
    "cmd_reduce",
    "cmd_safety",
    "load_expectations",
]
