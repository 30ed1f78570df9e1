"""
Typing Contexts - Ordered bindings and formula resources
========================================================

A context is an ordered sequence of entries; order matters because each
entry may only mention names bound strictly before it (there is no
exchange). cf() eliminates refinements and formula connectives, leaving
plain bindings and atomic resources.
"""

from dataclasses import dataclass
from typing import FrozenSet, Iterable, Iterator, List, Optional, Tuple, Union

from .binding import substitute
from .terms import Atom, Formula, One, Refined, Tensor, Type, Var
from .types import is_unrestricted_unfolded


@dataclass(frozen=True)
class Binding:
    """``name : type``"""
    name: str
    type: Type


@dataclass(frozen=True)
class Resource:
    """A formula known to hold, usable once."""
    formula: Formula


Entry = Union[Binding, Resource]


@dataclass(frozen=True)
class Context:
    """
    Immutable ordered context.

    Attributes:
        entries: Bindings and resources, oldest first
    """
    entries: Tuple[Entry, ...] = ()

    @classmethod
    def of(cls, entries: Iterable[Entry]) -> "Context":
        return cls(tuple(entries))

    def __iter__(self) -> Iterator[Entry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def extend(self, *entries: Entry) -> "Context":
        return Context(self.entries + tuple(entries))

    def domain(self) -> FrozenSet[str]:
        return frozenset(e.name for e in self.entries if isinstance(e, Binding))

    def bindings(self) -> List[Binding]:
        return [e for e in self.entries if isinstance(e, Binding)]

    def resources(self) -> List[Resource]:
        return [e for e in self.entries if isinstance(e, Resource)]

    def lookup(self, name: str) -> Optional[Type]:
        for entry in reversed(self.entries):
            if isinstance(entry, Binding) and entry.name == name:
                return entry.type
        return None


def cf_formula(formula: Formula) -> List[Resource]:
    """cf(1) = ., cf(A * B) = cf(A), cf(B), cf(A) = A for atoms."""
    if isinstance(formula, One):
        return []
    if isinstance(formula, Tensor):
        return cf_formula(formula.left) + cf_formula(formula.right)
    if isinstance(formula, Atom):
        return [Resource(formula)]
    raise TypeError(f"not a formula: {formula!r}")


def cf_binding(name: str, t: Type) -> List[Entry]:
    """cf(x:{y:T | F}) = cf(x:T), cf(F[x/y]); other bindings are kept."""
    if isinstance(t, Refined):
        return cf_binding(name, t.base) + cf_formula(substitute(t.formula, t.binder, Var(name)))
    return [Binding(name, t)]


def cf(context: Context) -> Context:
    """
    Canonical context: no refinement bindings and atomic resources only.

    Example:
        cf(a:{x:nat | charge(c,x)})  ->  a:nat, charge(c,a)
    """
    result: List[Entry] = []
    for entry in context:
        if isinstance(entry, Binding):
            result.extend(cf_binding(entry.name, entry.type))
        else:
            result.extend(cf_formula(entry.formula))
    return Context(tuple(result))


def is_unrestricted_context(context: Context) -> bool:
    """Only unrestricted bindings (up to head unfolding) and no resources at all."""
    for entry in context:
        if isinstance(entry, Resource):
            return False
        if not is_unrestricted_unfolded(entry.type):
            return False
    return True
