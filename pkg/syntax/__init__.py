"""
Syntax Module - Terms of the calculus and their basic operations
================================================================

This module provides:
- Values, formulae, types and processes (immutable dataclasses)
- Free variables and capture-free substitution
- Formula flattening and equivalence
- Duality, unrestrictedness, unfolding and type equivalence
- Typing contexts and the canonical-context function cf
- Alpha-equivalence, name normalization and erasure
"""

from .terms import (
    Qualifier,
    Direction,
    Var,
    UnitValue,
    Literal,
    Sum,
    Value,
    make_sum,
    Atom,
    Tensor,
    One,
    Formula,
    AtomBag,
    UnitT,
    End,
    Session,
    Refined,
    TVar,
    Rec,
    Type,
    Output,
    Input,
    Par,
    Repl,
    Inact,
    Restrict,
    Assume,
    Assert,
    Process,
    par_of,
    tensor_of,
)
from .names import fresh, base_name
from .binding import free_vars, substitute, rename, free_type_vars, substitute_type_var
from .formulas import flatten_formula, formula_equivalent
from .types import (
    dual,
    is_unrestricted,
    is_unrestricted_unfolded,
    is_session_type,
    unfold,
    unfold_head,
    type_equivalent,
    is_contractive,
    has_recursive_refinement,
)
from .context import Binding, Resource, Entry, Context, cf, cf_binding, cf_formula, is_unrestricted_context
from .alpha import alpha_equivalent, alpha_key, normalize_names, freshen
from .erase import erase, erase_type

__all__ = [
    "Qualifier",
    "Direction",
    "Var",
    "UnitValue",
    "Literal",
    "Sum",
    "Value",
    "make_sum",
    "Atom",
    "Tensor",
    "One",
    "Formula",
    "AtomBag",
    "UnitT",
    "End",
    "Session",
    "Refined",
    "TVar",
    "Rec",
    "Type",
    "Output",
    "Input",
    "Par",
    "Repl",
    "Inact",
    "Restrict",
    "Assume",
    "Assert",
    "Process",
    "par_of",
    "tensor_of",
    "fresh",
    "base_name",
    "free_vars",
    "substitute",
    "rename",
    "free_type_vars",
    "substitute_type_var",
    "flatten_formula",
    "formula_equivalent",
    "dual",
    "is_unrestricted",
    "is_unrestricted_unfolded",
    "is_session_type",
    "unfold",
    "unfold_head",
    "type_equivalent",
    "is_contractive",
    "has_recursive_refinement",
    "Binding",
    "Resource",
    "Entry",
    "Context",
    "cf",
    "cf_binding",
    "cf_formula",
    "is_unrestricted_context",
    "alpha_equivalent",
    "alpha_key",
    "normalize_names",
    "freshen",
    "erase",
    "erase_type",
]
