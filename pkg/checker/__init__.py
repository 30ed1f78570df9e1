"""
Checker Module - Typing for linearly refined session processes
==============================================================

This module provides:
- wf_formula / wf_type / wf_context: well-formedness
- check_split / enumerate_splits / context_update: the context operations
- prove_formula / check_value / check_process: the algorithmic checker
- typecheck / typecheck_process: top-level entry points
- reference_check: exhaustive derivation search used as an oracle
"""

from .algorithmic import (
    CheckResult,
    check_process,
    check_program_erased,
    check_value,
    erase_context,
    prove_formula,
    typecheck,
    typecheck_process,
)
from .context import Slot, ThreadedContext, check_split, context_update, enumerate_splits, is_linear_entry
from .reference import reference_check
from .wellformed import wf_context, wf_entry, wf_formula, wf_type

__all__ = [
    "CheckResult",
    "check_process",
    "check_program_erased",
    "check_value",
    "erase_context",
    "prove_formula",
    "typecheck",
    "typecheck_process",
    "Slot",
    "ThreadedContext",
    "check_split",
    "context_update",
    "enumerate_splits",
    "is_linear_entry",
    "reference_check",
    "wf_context",
    "wf_entry",
    "wf_formula",
    "wf_type",
]
