"""
Reference Checker - Derivation search over the declarative rules
================================================================

Independent of the threading checker: parallel composition tries every
split of the context, and every leaf (``0`` and the replicated body's
context) checks its own context is unrestricted. The search is bounded by
fuel and used as an oracle in tests.

Pruning: a linear binding is only sent to a side of a split whose free
names contain it (a side that never mentions it could not use it up);
formulae are tried on both sides. Value, assert and prefix premises are
resolved deterministically because all copies of an atom are
interchangeable and every linear binding has a single user.
"""

from typing import Dict, Optional, Tuple

from core.exceptions import FuelExhausted, TypeCheckError
from core.logging import get_logger
from syntax import (
    Assert,
    Assume,
    Binding,
    Context,
    Direction,
    Entry,
    Inact,
    Input,
    Literal,
    Output,
    Par,
    Process,
    Refined,
    Repl,
    Resource,
    Restrict,
    Session,
    Sum,
    Type,
    UnitT,
    UnitValue,
    Var,
    cf,
    cf_binding,
    cf_formula,
    dual,
    flatten_formula,
    free_vars,
    fresh,
    is_unrestricted_unfolded,
    rename,
    substitute,
    type_equivalent,
    unfold_head,
)

from .context import enumerate_splits, is_linear_entry
from .wellformed import wf_context

logger = get_logger(__name__)

Ctx = Tuple[Entry, ...]

DEFAULT_FUEL = 20000


def _domain(ctx: Ctx):
    return frozenset(e.name for e in ctx if isinstance(e, Binding))


def _names(ctx: Ctx):
    result = set()
    for e in ctx:
        if isinstance(e, Binding):
            result.add(e.name)
            result |= free_vars(e.type)
        else:
            result |= free_vars(e.formula)
    return result


def _latest(ctx: Ctx, name: str) -> Optional[int]:
    for index in range(len(ctx) - 1, -1, -1):
        entry = ctx[index]
        if isinstance(entry, Binding) and entry.name == name:
            return index
    return None


def _without(ctx: Ctx, index: int) -> Ctx:
    return ctx[:index] + ctx[index + 1:]


def _leaf(ctx: Ctx) -> bool:
    return not any(is_linear_entry(e) for e in ctx)


def _remove_atoms(ctx: Ctx, formula) -> Optional[Ctx]:
    for atom in flatten_formula(formula):
        for index in range(len(ctx) - 1, -1, -1):
            entry = ctx[index]
            if isinstance(entry, Resource) and entry.formula == atom:
                ctx = _without(ctx, index)
                break
        else:
            return None
    return ctx


def _equivalent(left: Type, right: Type) -> bool:
    try:
        return type_equivalent(left, right)
    except Exception:
        return False


def _value(ctx: Ctx, value, t: Type) -> Optional[Ctx]:
    """The context left after ``value : t`` takes what it needs, or None."""
    if isinstance(t, Refined):
        rest = _remove_atoms(ctx, substitute(t.formula, t.binder, value))
        return None if rest is None else _value(rest, value, t.base)
    if isinstance(value, Var):
        index = _latest(ctx, value.name)
        if index is None or not _equivalent(ctx[index].type, t):
            return None
        return ctx if is_unrestricted_unfolded(ctx[index].type) else _without(ctx, index)
    if isinstance(value, UnitValue):
        return ctx if t == UnitT("unit") else None
    if isinstance(value, Literal):
        return ctx if isinstance(t, UnitT) and t.name == value.base else None
    if isinstance(value, Sum):
        if t != UnitT("nat"):
            return None
        rest = _value(ctx, value.left, t)
        return None if rest is None else _value(rest, value.right, t)
    return None


def _update(ctx: Ctx, name: str, t: Type) -> Optional[Ctx]:
    index = _latest(ctx, name)
    if index is None:
        if not free_vars(t) <= _domain(ctx):
            return None
        return ctx + tuple(cf_binding(name, t))
    if is_unrestricted_unfolded(t) and _equivalent(t, ctx[index].type):
        return ctx
    return None


class _Search:
    """Memoized derivation search; every call to derive() burns one unit of fuel."""

    def __init__(self, fuel: int):
        self.fuel = fuel
        self.calls = 0
        self.memo: Dict[Tuple[Ctx, Process], bool] = {}

    def derive(self, ctx: Ctx, p: Process) -> bool:
        key = (ctx, p)
        if key in self.memo:
            return self.memo[key]
        self.calls += 1
        if self.calls > self.fuel:
            raise FuelExhausted(
                "reference checker ran out of fuel",
                {"fuel": self.fuel},
            )
        result = self._derive(ctx, p)
        self.memo[key] = result
        return result

    def _prefix(self, ctx: Ctx, p, direction: Direction):
        index = _latest(ctx, p.chan)
        if index is None:
            return None
        bound = ctx[index].type
        try:
            head = unfold_head(bound)
        except Exception:
            return None
        if not isinstance(head, Session) or head.dir is not direction:
            return None
        rest = ctx if is_unrestricted_unfolded(bound) else _without(ctx, index)
        return rest, head

    def _derive(self, ctx: Ctx, p: Process) -> bool:
        if isinstance(p, Inact):
            return _leaf(ctx)

        if isinstance(p, Par):
            left_names, right_names = free_vars(p.left), free_vars(p.right)

            def route(entry):
                if isinstance(entry, Binding):
                    on_left, on_right = entry.name in left_names, entry.name in right_names
                    if not on_left and not on_right:
                        return True, False
                    return on_left, on_right
                return True, True

            return any(
                self.derive(left, p.left) and self.derive(right, p.right)
                for left, right in enumerate_splits(ctx, route)
            )

        if isinstance(p, Repl):
            return _leaf(ctx) and self.derive(ctx, p.body)

        if isinstance(p, Restrict):
            domain = _domain(ctx)
            if not free_vars(p.annot) <= domain:
                return False
            peer = dual(p.annot)
            if peer is None:
                return False
            if p.peer is not None and (not free_vars(p.peer) <= domain or not _equivalent(p.peer, peer)):
                return False
            x, y, body = p.x, p.y, p.body
            taken = _names(ctx)
            if x in taken:
                x = fresh(x)
                body = rename(body, p.x, x)
            if y in taken or y == x:
                y = fresh(y)
                body = rename(body, p.y, y)
            return self.derive(ctx + (Binding(x, p.annot), Binding(y, peer)), body)

        if isinstance(p, Assume):
            if not free_vars(p.formula) <= _domain(ctx):
                return False
            return self.derive(ctx + tuple(cf_formula(p.formula)), p.body)

        if isinstance(p, Assert):
            rest = _remove_atoms(ctx, p.formula)
            return rest is not None and self.derive(rest, p.cont)

        if isinstance(p, Output):
            found = self._prefix(ctx, p, Direction.OUT)
            if found is None:
                return False
            rest, head = found
            rest = _value(rest, p.value, head.payload)
            if rest is None:
                return False
            rest = _update(rest, p.chan, substitute(head.cont, head.binder, p.value))
            return rest is not None and self.derive(rest, p.cont)

        if isinstance(p, Input):
            found = self._prefix(ctx, p, Direction.IN)
            if found is None:
                return False
            rest, head = found
            z, cont = p.binder, p.cont
            if z in _names(ctx):
                z = fresh(z)
                cont = rename(cont, p.binder, z)
            rest = rest + tuple(cf_binding(z, head.payload))
            rest = _update(rest, p.chan, substitute(head.cont, head.binder, Var(z)))
            return rest is not None and self.derive(rest, cont)

        raise TypeError(f"not a process: {p!r}")


def reference_check(context: Context, p: Process, fuel: int = DEFAULT_FUEL) -> bool:
    """
    Whether ``context |- p`` has a derivation, found by exhaustive search.

    Args:
        context: Typing context
        p: Process without macro calls
        fuel: Maximum number of judgements explored

    Returns:
        True iff a derivation exists

    Raises:
        FuelExhausted: When the search is cut short (no verdict)
    """
    try:
        wf_context(context)
    except TypeCheckError:
        return False
    search = _Search(fuel)
    result = search.derive(tuple(cf(context)), p)
    logger.debug(f"Reference check explored {search.calls} judgement(s): {result}")
    return result
