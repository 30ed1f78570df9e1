"""
Parsing Module - Concrete syntax of .lsp programs
=================================================

This module provides:
- parse_program / parse_context: source text to programs and contexts
- expand_macros: macro calls replaced by their bodies
- pretty_print: terms back to re-parsable text
- Diagnostic: positioned parser findings
"""

from .diagnostics import Diagnostic, Severity
from .grammar import GRAMMAR, get_parser
from .parser import parse_context, parse_program
from .printer import pretty_context, pretty_formula, pretty_print, pretty_process, pretty_type, pretty_value
from .program import Macro, MacroCall, Program, expand_macros


def load_program(source: str):
    """Parse and expand in one go: returns (program, expanded main)."""
    program = parse_program(source)
    return program, expand_macros(program)


__all__ = [
    "Diagnostic",
    "Severity",
    "GRAMMAR",
    "get_parser",
    "parse_program",
    "parse_context",
    "expand_macros",
    "load_program",
    "pretty_print",
    "pretty_process",
    "pretty_type",
    "pretty_formula",
    "pretty_value",
    "pretty_context",
    "Macro",
    "MacroCall",
    "Program",
]
