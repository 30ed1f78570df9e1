"""
Threaded Contexts - Context split and update
============================================

The declarative rules split the context between premises; the checker
instead threads one context through the premises and marks linear
entries consumed as they are used. Unrestricted bindings are never
consumed, which is the duplication half of the split.

check_split and enumerate_splits implement the split relation directly
and are used by the reference checker and the tests.
"""

from dataclasses import dataclass, replace
from typing import Callable, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from core.exceptions import TypeCheckError
from parsing.printer import pretty_entry, pretty_type
from syntax import (
    Binding,
    Context,
    Entry,
    Resource,
    Type,
    cf_binding,
    free_vars,
    is_unrestricted_unfolded,
    type_equivalent,
)

from .wellformed import wf_entry, wf_type


def is_linear_entry(entry: Entry) -> bool:
    """Resources and bindings whose type is not unrestricted (up to unfolding)."""
    if isinstance(entry, Resource):
        return True
    return not is_unrestricted_unfolded(entry.type)


@dataclass(frozen=True)
class Slot:
    entry: Entry
    consumed: bool = False


@dataclass(frozen=True)
class ThreadedContext:
    """
    A context whose linear entries carry a consumed flag.

    Attributes:
        slots: Entries in order, oldest first
    """
    slots: Tuple[Slot, ...] = ()

    @classmethod
    def of(cls, context: Context) -> "ThreadedContext":
        return cls(tuple(Slot(entry) for entry in context))

    def __len__(self) -> int:
        return len(self.slots)

    def live(self) -> List[Entry]:
        """Unconsumed entries, in order."""
        return [slot.entry for slot in self.slots if not slot.consumed]

    def to_context(self) -> Context:
        return Context(tuple(self.live()))

    def domain(self) -> FrozenSet[str]:
        return frozenset(e.name for e in self.live() if isinstance(e, Binding))

    def names(self) -> FrozenSet[str]:
        """Every name any slot binds or mentions, consumed or not."""
        result = set()
        for slot in self.slots:
            entry = slot.entry
            if isinstance(entry, Binding):
                result.add(entry.name)
                result |= free_vars(entry.type)
            else:
                result |= free_vars(entry.formula)
        return frozenset(result)

    def lookup(self, name: str) -> Optional[Tuple[int, Slot]]:
        """Latest slot binding name, consumed or not."""
        for index in range(len(self.slots) - 1, -1, -1):
            entry = self.slots[index].entry
            if isinstance(entry, Binding) and entry.name == name:
                return index, self.slots[index]
        return None

    def consume(self, index: int) -> "ThreadedContext":
        slots = list(self.slots)
        slots[index] = replace(slots[index], consumed=True)
        return ThreadedContext(tuple(slots))

    def append(self, *entries: Entry) -> "ThreadedContext":
        return ThreadedContext(self.slots + tuple(Slot(entry) for entry in entries))

    def truncate(self, mark: int) -> "ThreadedContext":
        return ThreadedContext(self.slots[:mark])

    def sealed(self) -> "ThreadedContext":
        """Every linear entry marked consumed: what a replicated body may see."""
        return ThreadedContext(
            tuple(replace(s, consumed=True) if is_linear_entry(s.entry) else s for s in self.slots)
        )

    def describe(self) -> List[str]:
        """The live entries, printed, for error reports."""
        return [pretty_entry(entry) for entry in self.live()]


# =============================================================================
# Split
# =============================================================================

def check_split(whole: Sequence[Entry], left: Sequence[Entry], right: Sequence[Entry]) -> bool:
    """
    Whether ``whole = left o right`` is derivable.

    Unrestricted bindings go to both sides; linear bindings and formulae go
    to exactly one side and must be well formed there.

    Examples:
        [x:end] = [x:end] o [x:end]                     -> True
        [x:lin ?y:unit.end] = [] o []                   -> False
        [c:ccard, a:nat, charge(c,a)]
            = [c:ccard, a:nat, charge(c,a)] o [c:ccard, a:nat]  -> True
    """
    whole, left, right = list(whole), list(left), list(right)
    if not whole:
        return not left and not right
    entry = whole[-1]
    rest = whole[:-1]
    if not is_linear_entry(entry):
        if left and right and left[-1] == entry and right[-1] == entry:
            return check_split(rest, left[:-1], right[:-1])
        return False
    for side, other, on_left in ((left, right, True), (right, left, False)):
        if side and side[-1] == entry:
            prefix = side[:-1]
            if not wf_entry(_bound(prefix), entry):
                continue
            if on_left and check_split(rest, prefix, other):
                return True
            if not on_left and check_split(rest, other, prefix):
                return True
    return False


def _bound(entries: Sequence[Entry]) -> List[str]:
    return [e.name for e in entries if isinstance(e, Binding)]


Route = Callable[[Entry], Tuple[bool, bool]]


def enumerate_splits(
    context: Sequence[Entry], route: Optional[Route] = None
) -> Iterator[Tuple[Tuple[Entry, ...], Tuple[Entry, ...]]]:
    """
    Every (left, right) with ``context = left o right``, without duplicates.

    Args:
        context: The context to split
        route: Optional filter saying to which sides (left, right) a linear
            entry may go; by default both are tried

    Yields:
        Pairs of entry tuples
    """
    splits = [((), ())]
    for entry in context:
        following = []
        for left, right in splits:
            if not is_linear_entry(entry):
                following.append((left + (entry,), right + (entry,)))
                continue
            to_left, to_right = route(entry) if route else (True, True)
            if to_left and wf_entry(_bound(left), entry):
                following.append((left + (entry,), right))
            if to_right and wf_entry(_bound(right), entry):
                following.append((left, right + (entry,)))
        splits = list(dict.fromkeys(following))
    yield from splits


# =============================================================================
# Update
# =============================================================================

def context_update(context: ThreadedContext, name: str, t: Type) -> ThreadedContext:
    """
    ``context + name:t``.

    Appends the binding when name is not live; otherwise succeeds only if
    the live binding is unrestricted and equivalent to t, leaving the
    context unchanged.

    Raises:
        TypeCheckError: E-UPDATE on a linear or non-equivalent rebinding,
            E-WF when t mentions unbound names
    """
    found = context.lookup(name)
    if found is None or found[1].consumed:
        wf_type(context, t)
        return context.append(*cf_binding(name, t))
    existing = found[1].entry.type
    if is_unrestricted_unfolded(t) and type_equivalent(t, existing):
        return context
    raise TypeCheckError(
        "E-UPDATE",
        f"{name} is already bound to {pretty_type(existing)} and cannot be updated to {pretty_type(t)}",
        context_slice=context.describe(),
    )
