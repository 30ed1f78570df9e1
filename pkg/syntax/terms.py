"""
Terms - Abstract syntax of the calculus
=======================================

This module defines the immutable syntax trees the whole toolkit works on:
- Values (variables, unit, base literals and integer sums)
- Formulae of the multiplicative fragment (atoms, tensor, one)
- Types (base/unit, end, qualified sessions, refinements, recursion)
- Processes (prefixes, composition, replication, restriction,
  assume and assert)

Every node is a frozen dataclass, so terms are hashable and can be shared
freely between threads. Process nodes carry an optional source span that
takes no part in equality.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Optional, Tuple, Union


Span = Optional[Tuple[int, int]]


class Qualifier(str, Enum):
    """Session qualifier."""
    LIN = "lin"
    UN = "un"


class Direction(str, Enum):
    """Direction of a session prefix."""
    IN = "?"
    OUT = "!"

    def flip(self) -> "Direction":
        return Direction.OUT if self is Direction.IN else Direction.IN


# =============================================================================
# Values
# =============================================================================

@dataclass(frozen=True)
class Var:
    """A variable (channel endpoint or data variable)."""
    name: str


@dataclass(frozen=True)
class UnitValue:
    """The unit value ``()``."""


@dataclass(frozen=True)
class Literal:
    """
    A base-type constant.

    Integer constants always have base ``nat``; named constants carry the
    base type they were declared with.
    """
    constant: Union[str, int]
    base: str

    @property
    def is_integer(self) -> bool:
        return isinstance(self.constant, int) and not isinstance(self.constant, bool)


@dataclass(frozen=True)
class Sum:
    """``left + right``; never built from two integer literals (see make_sum)."""
    left: "Value"
    right: "Value"


Value = Union[Var, UnitValue, Literal, Sum]


def make_sum(left: Value, right: Value) -> Value:
    """
    Build a sum, folding it when both operands are integer literals.

    Args:
        left: Left operand
        right: Right operand

    Returns:
        A Literal when both operands are integers, a Sum otherwise
    """
    if isinstance(left, Literal) and isinstance(right, Literal) and left.is_integer and right.is_integer:
        return Literal(left.constant + right.constant, "nat")
    return Sum(left, right)


# =============================================================================
# Formulae
# =============================================================================

@dataclass(frozen=True)
class Atom:
    """An uninterpreted predicate applied to values; nullary when args is empty."""
    predicate: str
    args: Tuple[Value, ...] = ()


@dataclass(frozen=True)
class Tensor:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class One:
    pass


Formula = Union[Atom, Tensor, One]


def _atom_key(atom: Atom) -> Tuple[str, str]:
    return (atom.predicate, repr(atom.args))


@dataclass(frozen=True)
class AtomBag:
    """
    A multiset of atoms, kept as a sorted tuple so equal bags compare equal.

    Attributes:
        atoms: The atoms, sorted, with repetitions
    """
    atoms: Tuple[Atom, ...] = ()

    @classmethod
    def of(cls, atoms: Iterable[Atom]) -> "AtomBag":
        items = tuple(atoms)
        for atom in items:
            if not isinstance(atom, Atom):
                raise TypeError(f"AtomBag holds atoms only, got {atom!r}")
        return cls(tuple(sorted(items, key=_atom_key)))

    def __iter__(self) -> Iterator[Atom]:
        return iter(self.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def __contains__(self, atom: object) -> bool:
        return atom in self.atoms

    def count(self, atom: Atom) -> int:
        return self.atoms.count(atom)

    def union(self, other: "AtomBag") -> "AtomBag":
        return AtomBag.of(self.atoms + other.atoms)

    def remove(self, atom: Atom) -> "AtomBag":
        """Remove one occurrence of atom; KeyError if absent."""
        if atom not in self.atoms:
            raise KeyError(atom)
        index = self.atoms.index(atom)
        return AtomBag(self.atoms[:index] + self.atoms[index + 1:])

    def difference(self, other: "AtomBag") -> "AtomBag":
        """Multiset difference (occurrences in other are removed once each)."""
        remaining = list(self.atoms)
        for atom in other.atoms:
            if atom in remaining:
                remaining.remove(atom)
        return AtomBag(tuple(remaining))


# =============================================================================
# Types
# =============================================================================

@dataclass(frozen=True)
class UnitT:
    """``unit`` or a declared base type such as ``nat``."""
    name: str


@dataclass(frozen=True)
class End:
    pass


@dataclass(frozen=True)
class Session:
    """``q !binder:payload.cont`` or ``q ?binder:payload.cont``; binder scopes over cont."""
    q: Qualifier
    dir: Direction
    binder: str
    payload: "Type"
    cont: "Type"


@dataclass(frozen=True)
class Refined:
    """``{binder:base | formula}``; binder scopes over formula."""
    binder: str
    base: "Type"
    formula: Formula


@dataclass(frozen=True)
class TVar:
    name: str


@dataclass(frozen=True)
class Rec:
    name: str
    body: "Type"


Type = Union[UnitT, End, Session, Refined, TVar, Rec]


# =============================================================================
# Processes
# =============================================================================

def _span() -> Span:
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Output:
    chan: str
    value: Value
    cont: "Process"
    span: Span = _span()


@dataclass(frozen=True)
class Input:
    chan: str
    binder: str
    cont: "Process"
    span: Span = _span()


@dataclass(frozen=True)
class Par:
    left: "Process"
    right: "Process"
    span: Span = _span()


@dataclass(frozen=True)
class Repl:
    body: "Process"
    span: Span = _span()


@dataclass(frozen=True)
class Inact:
    span: Span = _span()


@dataclass(frozen=True)
class Restrict:
    """
    ``new x y : annot P``.

    annot is the type of the x endpoint; peer, when given, states the type
    of the y endpoint explicitly and must be equivalent to dual(annot).
    """
    x: str
    y: str
    annot: Type
    body: "Process"
    peer: Optional[Type] = None
    span: Span = _span()


@dataclass(frozen=True)
class Assume:
    formula: Formula
    body: "Process"
    span: Span = _span()


@dataclass(frozen=True)
class Assert:
    formula: Formula
    cont: "Process"
    span: Span = _span()


Process = Union[Output, Input, Par, Repl, Inact, Restrict, Assume, Assert]

VALUE_TYPES = (Var, UnitValue, Literal, Sum)
FORMULA_TYPES = (Atom, Tensor, One)
TYPE_TYPES = (UnitT, End, Session, Refined, TVar, Rec)
PROCESS_TYPES = (Output, Input, Par, Repl, Inact, Restrict, Assume, Assert)


def par_of(threads: Iterable["Process"]) -> "Process":
    """Left-nested parallel composition of threads; ``0`` when empty."""
    result: Optional[Process] = None
    for thread in threads:
        result = thread if result is None else Par(result, thread)
    return result if result is not None else Inact()


def tensor_of(atoms: Iterable[Formula]) -> Formula:
    """Left-nested tensor of formulae; ``1`` when empty."""
    result: Optional[Formula] = None
    for atom in atoms:
        result = atom if result is None else Tensor(result, atom)
    return result if result is not None else One()
