"""
Well-formedness of formulae, types and contexts.

A formula or type is well formed under a context when every value name it
mentions is bound there; a context is well formed when each entry is well
formed with respect to the entries strictly before it and no name is bound
twice.
"""

from typing import Iterable, List

from core.exceptions import TypeCheckError
from parsing.printer import pretty_entry, pretty_formula, pretty_type
from syntax import Binding, Context, Entry, Formula, Type, free_vars


def _names(context) -> frozenset:
    """Bound names of a Context or the live names of a ThreadedContext."""
    return frozenset(context.domain())


def wf_formula(context, formula: Formula) -> None:
    """
    fv(formula) must be bound in the context.

    Raises:
        TypeCheckError: E-WF naming the unbound names
    """
    missing = sorted(free_vars(formula) - _names(context))
    if missing:
        raise TypeCheckError(
            "E-WF",
            f"formula {pretty_formula(formula)} mentions unbound name(s) {', '.join(missing)}",
        )


def wf_type(context, t: Type) -> None:
    """
    fv(t) must be bound in the context.

    Raises:
        TypeCheckError: E-WF naming the unbound names
    """
    missing = sorted(free_vars(t) - _names(context))
    if missing:
        raise TypeCheckError(
            "E-WF",
            f"type {pretty_type(t)} mentions unbound name(s) {', '.join(missing)}",
        )


def wf_entry(bound: Iterable[str], entry: Entry) -> bool:
    """Whether entry is well formed after the given bound names."""
    names = frozenset(bound)
    if isinstance(entry, Binding):
        return entry.name not in names and free_vars(entry.type) <= names
    return free_vars(entry.formula) <= names


def wf_context(context: Context) -> None:
    """
    Each entry well formed with respect to its strict prefix.

    Examples:
        x:unit, A(x)   is well formed
        A(x), x:unit   is not (E-WF naming A(x))

    Raises:
        TypeCheckError: E-WF naming the first offending entry
    """
    bound: List[str] = []
    for position, entry in enumerate(context):
        if isinstance(entry, Binding) and entry.name in bound:
            raise TypeCheckError(
                "E-WF",
                f"entry {position + 1} ({pretty_entry(entry)}) binds {entry.name} a second time",
                context_slice=[pretty_entry(e) for e in context],
            )
        if not wf_entry(bound, entry):
            term = entry.type if isinstance(entry, Binding) else entry.formula
            missing = sorted(free_vars(term) - frozenset(bound))
            raise TypeCheckError(
                "E-WF",
                f"entry {position + 1} ({pretty_entry(entry)}) mentions {', '.join(missing)}, "
                "which is not bound before it",
                context_slice=[pretty_entry(e) for e in context],
            )
        if isinstance(entry, Binding):
            bound.append(entry.name)
