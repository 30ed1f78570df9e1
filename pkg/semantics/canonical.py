"""
Canonical Forms - Heating processes to news, assumes and threads
================================================================

A canonical process is

    new x1 y1 : T1 ... new xn yn : Tn (assume A1) ... (assume Am) (P1 | ... | Pk)

where the Ai are atoms and no Pi is a restriction, an assumption or a
parallel composition. Heating is applied in one direction only:
restrictions and assumptions are hoisted out of compositions (renaming
restricted names that would clash), tensors in assumptions and leading
assertions are split, ``1`` is dropped and ``0`` threads disappear.
Replication is never unfolded here; enumerate_canonical_forms does that
under a budget.
"""

from dataclasses import dataclass
from typing import Dict, List, Set, Tuple

from core.logging import get_logger
from syntax import (
    Assert,
    Assume,
    Atom,
    AtomBag,
    Inact,
    Par,
    Process,
    Repl,
    Restrict,
    Type,
    One,
    Tensor,
    alpha_key,
    free_vars,
    fresh,
    freshen,
    par_of,
    rename,
)

logger = get_logger(__name__)

RestrictionEntry = Tuple[str, str, Type]


@dataclass(frozen=True)
class CanonicalProcess:
    """
    Attributes:
        restrictions: (x, y, type of x) outermost first
        assumptions: Atoms assumed at top level
        threads: Non-empty; no Restrict, Assume or Par among them
    """
    restrictions: Tuple[RestrictionEntry, ...]
    assumptions: AtomBag
    threads: Tuple[Process, ...]

    def to_process(self) -> Process:
        """Read back: restriction chain, one assume per atom, then the threads."""
        result = par_of(self.threads)
        for atom in reversed(self.assumptions.atoms):
            result = Assume(atom, result)
        for x, y, t in reversed(self.restrictions):
            result = Restrict(x, y, t, result)
        return result


def assert_chain(p: Process) -> Tuple[List[Atom], Process]:
    """
    Atoms of the leading assert chain and what follows it.

    ``assert A * 1. assert B. P`` gives ([A, B], P).
    """
    atoms: List[Atom] = []
    while isinstance(p, Assert):
        atoms.extend(_atoms_in_order(p.formula))
        p = p.cont
    return atoms, p


def _atoms_in_order(formula) -> List[Atom]:
    if isinstance(formula, One):
        return []
    if isinstance(formula, Tensor):
        return _atoms_in_order(formula.left) + _atoms_in_order(formula.right)
    return [formula]


def build_chain(atoms: List[Atom], rest: Process) -> Process:
    """``assert A1. ... assert An. rest``"""
    for atom in reversed(atoms):
        rest = Assert(atom, rest)
    return rest


class _Heater:
    """Collects restrictions, assumptions and threads in left-to-right order."""

    def __init__(self, taken: Set[str]):
        self.taken = set(taken)
        self.restrictions: List[RestrictionEntry] = []
        self.atoms: List[Atom] = []
        self.threads: List[Process] = []

    def _claim(self, name: str, body: Process) -> Tuple[str, Process]:
        if name in self.taken:
            new = fresh(name)
            body = rename(body, name, new)
            name = new
        self.taken.add(name)
        return name, body

    def heat(self, p: Process) -> None:
        if isinstance(p, Par):
            self.heat(p.left)
            self.heat(p.right)
        elif isinstance(p, Inact):
            return
        elif isinstance(p, Restrict):
            x, body = self._claim(p.x, p.body)
            y, body = self._claim(p.y, body)
            self.restrictions.append((x, y, p.annot))
            self.heat(body)
        elif isinstance(p, Assume):
            self.atoms.extend(_atoms_in_order(p.formula))
            self.heat(p.body)
        elif isinstance(p, Assert):
            atoms, rest = assert_chain(p)
            if atoms:
                self.threads.append(build_chain(atoms, rest))
            else:
                self.heat(rest)
        else:
            self.threads.append(p)


def _collect_garbage(restrictions: List[RestrictionEntry], atoms: AtomBag, threads: Tuple[Process, ...]):
    """Drop restrictions neither of whose endpoints occurs anywhere after them."""
    used: Set[str] = set()
    for thread in threads:
        used |= free_vars(thread)
    for atom in atoms:
        used |= free_vars(atom)
    kept: List[RestrictionEntry] = []
    for x, y, t in reversed(restrictions):
        if x in used or y in used:
            kept.append((x, y, t))
            used |= free_vars(t)
    kept.reverse()
    return kept


def canonicalize(p: Process) -> CanonicalProcess:
    """
    Heat p to canonical form.

    Examples:
        (assume 1) P        ->  canonicalize(P)
        (assume A * B) 0    ->  assumptions {A, B}, threads [0]
    """
    heater = _Heater(free_vars(p))
    heater.heat(p)
    threads = tuple(heater.threads) or (Inact(),)
    atoms = AtomBag.of(heater.atoms)
    restrictions = _collect_garbage(heater.restrictions, atoms, threads)
    return CanonicalProcess(tuple(restrictions), atoms, threads)


def canonical_key(c: CanonicalProcess):
    """Equal for canonical forms that read back to alpha-equivalent processes."""
    return alpha_key(c.to_process())


def _unfold_thread(c: CanonicalProcess, index: int) -> CanonicalProcess:
    """``*P`` at index becomes ``P | *P`` and the copy is heated."""
    repl = c.threads[index]
    copy = freshen(repl.body)
    threads = c.threads[:index] + (copy, repl) + c.threads[index + 1:]
    return canonicalize(CanonicalProcess(c.restrictions, c.assumptions, threads).to_process())


def explore_canonical_forms(p: Process, budget: int) -> Tuple[List[CanonicalProcess], int]:
    """
    Canonical forms reachable by unfolding each replicated process at most
    budget times, and the largest number of unfoldings any form needed.
    """
    start = canonicalize(p)
    forms: List[CanonicalProcess] = [start]
    seen = {canonical_key(start)}
    frontier: List[Tuple[CanonicalProcess, Dict]] = [(start, {})]
    used = 0
    while frontier:
        form, counters = frontier.pop(0)
        for index, thread in enumerate(form.threads):
            if not isinstance(thread, Repl):
                continue
            key = alpha_key(thread)
            count = counters.get(key, 0)
            if count >= budget:
                continue
            unfolded = _unfold_thread(form, index)
            form_key = canonical_key(unfolded)
            if form_key in seen:
                continue
            seen.add(form_key)
            forms.append(unfolded)
            following = {**counters, key: count + 1}
            used = max(used, count + 1)
            frontier.append((unfolded, following))
    logger.debug(f"Explored {len(forms)} canonical form(s), budget {budget}")
    return forms, used


def enumerate_canonical_forms(p: Process, budget: int = 1) -> List[CanonicalProcess]:
    """
    Every canonical form of p with each replicated process unfolded 0..budget times.

    Examples:
        *assert A. 0, budget 1  ->  [*assert A. 0]  and  [assert A. 0 | *assert A. 0]
        a process without replication  ->  [canonicalize(p)]
    """
    return explore_canonical_forms(p, budget)[0]
