"""
Printer - Terms back to concrete syntax
=======================================

The output re-parses to an alpha-equivalent term: ``main = `` followed by
a printed process is a valid program, and a printed type is valid after
``type T = ``. Named literals are printed self-describing
(`` `p:product` ``) so no ``const`` header is needed to read them back.
"""

from typing import Union

from syntax import (
    Assert,
    Assume,
    Atom,
    Binding,
    Context,
    End,
    Inact,
    Input,
    Literal,
    One,
    Output,
    Par,
    Rec,
    Refined,
    Repl,
    Resource,
    Restrict,
    Session,
    Sum,
    Tensor,
    TVar,
    UnitT,
    UnitValue,
    Var,
    free_vars,
)
from syntax.terms import FORMULA_TYPES, PROCESS_TYPES, TYPE_TYPES, VALUE_TYPES

from .program import MacroCall


def pretty_value(v) -> str:
    if isinstance(v, Var):
        return v.name
    if isinstance(v, UnitValue):
        return "()"
    if isinstance(v, Literal):
        if v.is_integer:
            return str(v.constant)
        return f"`{v.constant}:{v.base}`"
    if isinstance(v, Sum):
        right = pretty_value(v.right)
        if isinstance(v.right, Sum):
            right = f"({right})"
        return f"{pretty_value(v.left)}+{right}"
    raise TypeError(f"not a value: {v!r}")


def pretty_formula(f) -> str:
    if isinstance(f, One):
        return "1"
    if isinstance(f, Atom):
        if not f.args:
            return f.predicate
        return f"{f.predicate}({','.join(pretty_value(a) for a in f.args)})"
    if isinstance(f, Tensor):
        right = pretty_formula(f.right)
        if isinstance(f.right, Tensor):
            right = f"({right})"
        return f"{pretty_formula(f.left)} * {right}"
    raise TypeError(f"not a formula: {f!r}")


def _type_atom(t) -> str:
    text = pretty_type(t)
    return f"({text})" if isinstance(t, (Session, Rec)) else text


def pretty_type(t) -> str:
    """
    Example:
        lin !p:product. lin !c:ccard. lin !a:{x:nat | charge(c,x)}. end
    """
    if isinstance(t, UnitT):
        return t.name
    if isinstance(t, End):
        return "end"
    if isinstance(t, TVar):
        return t.name
    if isinstance(t, Rec):
        return f"rec {t.name}. {pretty_type(t.body)}"
    if isinstance(t, Refined):
        return f"{{{t.binder}:{pretty_type(t.base)} | {pretty_formula(t.formula)}}}"
    if isinstance(t, Session):
        payload = _type_atom(t.payload)
        # Anonymous binders come back from the parser as _'n.
        if t.binder.startswith("_") and t.binder not in free_vars(t.cont):
            head = f"{t.q.value} {t.dir.value}{payload}"
        else:
            head = f"{t.q.value} {t.dir.value}{t.binder}:{payload}"
        return f"{head}. {pretty_type(t.cont)}"
    raise TypeError(f"not a type: {t!r}")


def _prefix(p) -> str:
    text = pretty_process(p)
    return f"({text})" if isinstance(p, Par) else text


def pretty_process(p) -> str:
    if isinstance(p, Inact):
        return "0"
    if isinstance(p, Output):
        return f"{p.chan}!{pretty_value(p.value)}. {_prefix(p.cont)}"
    if isinstance(p, Input):
        return f"{p.chan}?{p.binder}. {_prefix(p.cont)}"
    if isinstance(p, Par):
        right = pretty_process(p.right)
        if isinstance(p.right, Par):
            right = f"({right})"
        return f"{pretty_process(p.left)} | {right}"
    if isinstance(p, Repl):
        return f"*{_prefix(p.body)}"
    if isinstance(p, Restrict):
        annot = _type_atom(p.annot)
        if p.peer is not None:
            annot += f", {_type_atom(p.peer)}"
        return f"new {p.x} {p.y} : {annot} {_prefix(p.body)}"
    if isinstance(p, Assume):
        return f"(assume {pretty_formula(p.formula)}) {_prefix(p.body)}"
    if isinstance(p, Assert):
        return f"assert {pretty_formula(p.formula)}. {_prefix(p.cont)}"
    if isinstance(p, MacroCall):
        if not p.args:
            return p.name
        return f"{p.name}({', '.join(pretty_value(a) for a in p.args)})"
    raise TypeError(f"not a process: {p!r}")


def pretty_context(context: Context) -> str:
    """``x : T, A(x), ...`` in the syntax accepted by parse_context."""
    return ", ".join(pretty_entry(entry) for entry in context)


def pretty_entry(entry: Union[Binding, Resource]) -> str:
    if isinstance(entry, Binding):
        return f"{entry.name} : {pretty_type(entry.type)}"
    return pretty_formula(entry.formula)


def pretty_print(term) -> str:
    """
    Print a process, type, formula, value or context.

    Examples:
        >>> pretty_print(Inact())
        '0'
        >>> pretty_print(Assume(One(), Inact()))
        '(assume 1) 0'
    """
    if isinstance(term, PROCESS_TYPES) or isinstance(term, MacroCall):
        return pretty_process(term)
    if isinstance(term, TYPE_TYPES):
        return pretty_type(term)
    if isinstance(term, FORMULA_TYPES):
        return pretty_formula(term)
    if isinstance(term, VALUE_TYPES):
        return pretty_value(term)
    if isinstance(term, Context):
        return pretty_context(term)
    if isinstance(term, (Binding, Resource)):
        return pretty_entry(term)
    raise TypeError(f"cannot print {term!r}")
