"""
Binding - Free variables and capture-free substitution
======================================================

Binders: ``x?y.P`` binds y in P; ``new x y : T P`` binds x and y in P (not
in T); ``q ?y:T.U`` / ``q !y:T.U`` bind y in U; ``{y:T | F}`` binds y in F;
``rec a. T`` binds the type variable a in T. Type variables live in their
own namespace and are handled by free_type_vars / substitute_type_var.
"""

from typing import FrozenSet, Tuple, TypeVar

from core.exceptions import SortError

from .names import fresh
from .terms import (
    Assert,
    Assume,
    Atom,
    Input,
    Output,
    Par,
    Rec,
    Refined,
    Repl,
    Restrict,
    Session,
    Sum,
    Tensor,
    TVar,
    Value,
    Var,
    make_sum,
)

T = TypeVar("T")

_EMPTY: FrozenSet[str] = frozenset()


def free_vars(term) -> FrozenSet[str]:
    """
    Free (value-level) variables of a process, type, formula or value.

    Args:
        term: Any term

    Returns:
        Frozen set of names
    """
    if isinstance(term, Var):
        return frozenset((term.name,))
    if isinstance(term, Sum):
        return free_vars(term.left) | free_vars(term.right)
    if isinstance(term, Atom):
        result = _EMPTY
        for arg in term.args:
            result |= free_vars(arg)
        return result
    if isinstance(term, Tensor):
        return free_vars(term.left) | free_vars(term.right)
    if isinstance(term, Session):
        return free_vars(term.payload) | (free_vars(term.cont) - {term.binder})
    if isinstance(term, Refined):
        return free_vars(term.base) | (free_vars(term.formula) - {term.binder})
    if isinstance(term, Rec):
        return free_vars(term.body)
    if isinstance(term, Output):
        return frozenset((term.chan,)) | free_vars(term.value) | free_vars(term.cont)
    if isinstance(term, Input):
        return frozenset((term.chan,)) | (free_vars(term.cont) - {term.binder})
    if isinstance(term, Par):
        return free_vars(term.left) | free_vars(term.right)
    if isinstance(term, Repl):
        return free_vars(term.body)
    if isinstance(term, Restrict):
        result = free_vars(term.annot) | (free_vars(term.body) - {term.x, term.y})
        if term.peer is not None:
            result |= free_vars(term.peer)
        return result
    if isinstance(term, Assume):
        return free_vars(term.formula) | free_vars(term.body)
    if isinstance(term, Assert):
        return free_vars(term.formula) | free_vars(term.cont)
    return _EMPTY


def rename(term: T, old: str, new: str) -> T:
    """Rename free occurrences of old to new."""
    return substitute(term, old, Var(new))


def _under_binder(binder: str, body, x: str, v: Value) -> Tuple[str, object]:
    """Push [v/x] under a binder, renaming the binder if v would be captured."""
    if binder == x or x not in free_vars(body):
        return binder, body
    if binder in free_vars(v):
        renamed = fresh(binder)
        body = rename(body, binder, renamed)
        binder = renamed
    return binder, substitute(body, x, v)


def _subject(chan: str, x: str, v: Value) -> str:
    if chan != x:
        return chan
    if not isinstance(v, Var):
        raise SortError(f"cannot substitute {v!r} for channel subject {x}")
    return v.name


def substitute(term: T, x: str, v: Value) -> T:
    """
    Capture-free substitution term[v/x].

    Binders are renamed fresh when v mentions them; sums are constant-folded
    after substitution. A no-op (the very same object) when x is not free.

    Args:
        term: Process, type, formula or value
        x: Variable to replace
        v: Replacement value

    Returns:
        The substituted term

    Raises:
        SortError: If v is not a variable and x occurs as a channel subject
    """
    if x not in free_vars(term):
        return term

    if isinstance(term, Var):
        return v
    if isinstance(term, Sum):
        return make_sum(substitute(term.left, x, v), substitute(term.right, x, v))
    if isinstance(term, Atom):
        return Atom(term.predicate, tuple(substitute(a, x, v) for a in term.args))
    if isinstance(term, Tensor):
        return Tensor(substitute(term.left, x, v), substitute(term.right, x, v))
    if isinstance(term, Session):
        binder, cont = _under_binder(term.binder, term.cont, x, v)
        return Session(term.q, term.dir, binder, substitute(term.payload, x, v), cont)
    if isinstance(term, Refined):
        binder, formula = _under_binder(term.binder, term.formula, x, v)
        return Refined(binder, substitute(term.base, x, v), formula)
    if isinstance(term, Rec):
        return Rec(term.name, substitute(term.body, x, v))
    if isinstance(term, Output):
        return Output(
            _subject(term.chan, x, v),
            substitute(term.value, x, v),
            substitute(term.cont, x, v),
            span=term.span,
        )
    if isinstance(term, Input):
        binder, cont = _under_binder(term.binder, term.cont, x, v)
        return Input(_subject(term.chan, x, v), binder, cont, span=term.span)
    if isinstance(term, Par):
        return Par(substitute(term.left, x, v), substitute(term.right, x, v), span=term.span)
    if isinstance(term, Repl):
        return Repl(substitute(term.body, x, v), span=term.span)
    if isinstance(term, Restrict):
        annot = substitute(term.annot, x, v)
        peer = substitute(term.peer, x, v) if term.peer is not None else None
        a, b, body = term.x, term.y, term.body
        if x not in (a, b) and x in free_vars(body):
            captured = free_vars(v)
            if a in captured:
                renamed = fresh(a)
                body, a = rename(body, a, renamed), renamed
            if b in captured:
                renamed = fresh(b)
                body, b = rename(body, b, renamed), renamed
            body = substitute(body, x, v)
        return Restrict(a, b, annot, body, peer, span=term.span)
    if isinstance(term, Assume):
        return Assume(substitute(term.formula, x, v), substitute(term.body, x, v), span=term.span)
    if isinstance(term, Assert):
        return Assert(substitute(term.formula, x, v), substitute(term.cont, x, v), span=term.span)
    return term


# =============================================================================
# Type variables
# =============================================================================

def free_type_vars(t) -> FrozenSet[str]:
    """Type variables of t not bound by an enclosing ``rec``."""
    if isinstance(t, TVar):
        return frozenset((t.name,))
    if isinstance(t, Rec):
        return free_type_vars(t.body) - {t.name}
    if isinstance(t, Session):
        return free_type_vars(t.payload) | free_type_vars(t.cont)
    if isinstance(t, Refined):
        return free_type_vars(t.base)
    return _EMPTY


def substitute_type_var(t, name: str, u):
    """
    Capture-free t[u/name] on type variables.

    Rec binders are renamed when u mentions them; value binders of sessions
    and refinements are renamed when u has them free.
    """
    if name not in free_type_vars(t):
        return t
    if isinstance(t, TVar):
        return u
    if isinstance(t, Rec):
        alpha, body = t.name, t.body
        if alpha in free_type_vars(u):
            renamed = fresh(alpha)
            body = substitute_type_var(body, alpha, TVar(renamed))
            alpha = renamed
        return Rec(alpha, substitute_type_var(body, name, u))
    if isinstance(t, Session):
        binder, cont = t.binder, t.cont
        if binder in free_vars(u):
            renamed = fresh(binder)
            cont, binder = rename(cont, binder, renamed), renamed
        return Session(
            t.q,
            t.dir,
            binder,
            substitute_type_var(t.payload, name, u),
            substitute_type_var(cont, name, u),
        )
    if isinstance(t, Refined):
        return Refined(t.binder, substitute_type_var(t.base, name, u), t.formula)
    return t


__all__ = [
    "free_vars",
    "substitute",
    "rename",
    "free_type_vars",
    "substitute_type_var",
]
