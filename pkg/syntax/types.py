"""
Types - Duality, unrestrictedness, unfolding and equivalence
============================================================

This module implements the operations on session types:
- dual: swap ? and ! along the continuation spine
- is_unrestricted: unit/base, end and ``un`` sessions
- unfold / unfold_head: one-step and head unfolding of ``rec``
- type_equivalent: coinductive (equi-recursive) equivalence
- is_contractive / has_recursive_refinement: the two well-formedness
  restrictions on ``rec``
"""

from typing import Optional, Set

from core.exceptions import LinsessError, NotRecursiveError

from .alpha import alpha_key
from .binding import free_vars, rename, substitute_type_var
from .formulas import formula_equivalent
from .names import fresh
from .terms import End, Qualifier, Rec, Refined, Session, TVar, Type, UnitT


def dual(t: Type) -> Optional[Type]:
    """
    Dual of a session type, or None where duality is undefined.

    The payload of a prefix is kept as is; only the continuation spine is
    dualised. Undefined on unit/base types and on refinements.

    Args:
        t: Type to dualise

    Returns:
        The dual type, or None
    """
    if isinstance(t, End):
        return t
    if isinstance(t, TVar):
        return t
    if isinstance(t, Session):
        cont = dual(t.cont)
        if cont is None:
            return None
        return Session(t.q, t.dir.flip(), t.binder, t.payload, cont)
    if isinstance(t, Rec):
        body = dual(t.body)
        return None if body is None else Rec(t.name, body)
    return None


def is_unrestricted(t: Type) -> bool:
    """un(T): unit/base types, end, and un-qualified sessions."""
    if isinstance(t, (UnitT, End)):
        return True
    return isinstance(t, Session) and t.q is Qualifier.UN


def unfold(t: Type) -> Type:
    """
    One-step unfolding ``rec a. T`` -> ``T[rec a. T / a]``.

    Raises:
        NotRecursiveError: If t is not a rec type
    """
    if not isinstance(t, Rec):
        raise NotRecursiveError(f"cannot unfold a non-recursive type: {t!r}")
    return substitute_type_var(t.body, t.name, t)


def unfold_head(t: Type) -> Type:
    """
    Unfold until the head is not a rec.

    Terminates on contractive types: each unfolding removes one rec from the
    head chain.
    """
    depth = 0
    head = t
    while isinstance(head, Rec):
        depth += 1
        head = head.body
    for _ in range(depth):
        if not isinstance(t, Rec):
            break
        t = unfold(t)
    if isinstance(t, Rec):
        raise LinsessError("type is not contractive", {"type": repr(t)})
    return t


def is_unrestricted_unfolded(t: Type) -> bool:
    """un(T) taken up to head unfolding: ``rec a. un ?y:S. a`` is unrestricted."""
    try:
        return is_unrestricted(unfold_head(t))
    except LinsessError:
        return False


def is_session_type(t: Type) -> bool:
    """True for end, sessions, type variables and rec types over them."""
    return dual(t) is not None


# =============================================================================
# Well-formedness of rec
# =============================================================================

def _rec_chain(t: Rec):
    names = []
    while isinstance(t, Rec):
        names.append(t.name)
        t = t.body
    return names, t


def _subterms(t: Type):
    yield t
    if isinstance(t, Session):
        yield from _subterms(t.payload)
        yield from _subterms(t.cont)
    elif isinstance(t, Refined):
        yield from _subterms(t.base)
    elif isinstance(t, Rec):
        yield from _subterms(t.body)


def is_contractive(t: Type) -> bool:
    """No subexpression ``rec a1. ... rec an. a1``."""
    for sub in _subterms(t):
        if isinstance(sub, Rec):
            names, body = _rec_chain(sub)
            if isinstance(body, TVar) and body.name in names:
                return False
    return True


def has_recursive_refinement(t: Type) -> bool:
    """Whether t contains ``rec a1. ... rec an. {x:T | F}``."""
    for sub in _subterms(t):
        if isinstance(sub, Rec):
            _, body = _rec_chain(sub)
            if isinstance(body, Refined):
                return True
    return False


# =============================================================================
# Equivalence
# =============================================================================

def _align(b1: str, body1, b2: str, body2):
    """Rename two binders to a common name, avoiding capture on either side."""
    if b1 == b2:
        return body1, body2
    if b1 not in free_vars(body2):
        return body1, rename(body2, b2, b1)
    common = fresh(b1)
    return rename(body1, b1, common), rename(body2, b2, common)


class _Bisimulation:
    """
    Coinductive equivalence check.

    Pairs are compared after head unfolding; each visited pair is recorded
    under a key that renames all names of the pair consistently, so the
    finitely many pairs reachable from contractive types are visited once.
    """

    def __init__(self):
        self.visited: Set = set()

    def equivalent(self, left: Type, right: Type) -> bool:
        left = unfold_head(left)
        right = unfold_head(right)
        key = alpha_key(left, right, rename_free=True)
        if key in self.visited:
            return True
        self.visited.add(key)

        if isinstance(left, UnitT):
            return isinstance(right, UnitT) and left.name == right.name
        if isinstance(left, End):
            return isinstance(right, End)
        if isinstance(left, TVar):
            return isinstance(right, TVar) and left.name == right.name
        if isinstance(left, Session):
            if not isinstance(right, Session) or left.q is not right.q or left.dir is not right.dir:
                return False
            if not self.equivalent(left.payload, right.payload):
                return False
            cont1, cont2 = _align(left.binder, left.cont, right.binder, right.cont)
            return self.equivalent(cont1, cont2)
        if isinstance(left, Refined):
            if not isinstance(right, Refined):
                return False
            if not self.equivalent(left.base, right.base):
                return False
            phi1, phi2 = _align(left.binder, left.formula, right.binder, right.formula)
            return formula_equivalent(phi1, phi2)
        return False


def type_equivalent(left: Type, right: Type) -> bool:
    """
    Coinductive type equivalence.

    A recursive type is equivalent to its unfolding, and refinements that
    differ only in equivalent formulae are equivalent.

    Args:
        left: First type (contractive)
        right: Second type (contractive)

    Returns:
        Whether the types are equivalent
    """
    return _Bisimulation().equivalent(left, right)
