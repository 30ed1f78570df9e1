"""
Semantics Module - Heating, reduction and safety
================================================

This module provides:
- canonicalize / enumerate_canonical_forms: heating to canonical form
- find_redexes / reduce_step / run: the reduction engine and traces
- is_safe_canonical / check_safety: assertion safety
"""

from .canonical import (
    CanonicalProcess,
    assert_chain,
    canonicalize,
    enumerate_canonical_forms,
    explore_canonical_forms,
)
from .reduction import (
    POLICIES,
    AssertCut,
    Com,
    Redex,
    Trace,
    TraceStep,
    Verdict,
    find_redexes,
    fire,
    reduce_step,
    run,
)
from .safety import SafetyReport, Witness, check_safety, is_safe_canonical

__all__ = [
    "CanonicalProcess",
    "assert_chain",
    "canonicalize",
    "enumerate_canonical_forms",
    "explore_canonical_forms",
    "POLICIES",
    "AssertCut",
    "Com",
    "Redex",
    "Trace",
    "TraceStep",
    "Verdict",
    "find_redexes",
    "fire",
    "reduce_step",
    "run",
    "SafetyReport",
    "Witness",
    "check_safety",
    "is_safe_canonical",
]
