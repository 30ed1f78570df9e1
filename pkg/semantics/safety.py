"""
Safety - Assertions matched by assumptions
==========================================

A process is safe when, in every canonical form it heats to, every
asserted atom at the head of a thread is among the top-level assumptions.
The check is membership: two threads asserting the same atom are both
matched by a single assumption. SafetyReport.overcommitted lists the atoms
where that happens, since only one of those asserts can actually reduce.

Replicated threads are unfolded up to a budget, so the verdict covers
the canonical forms within that budget only.
"""

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Tuple

from core.logging import get_logger
from parsing.printer import pretty_formula, pretty_print
from syntax import Atom, Process, normalize_names

from .canonical import CanonicalProcess, assert_chain, explore_canonical_forms

logger = get_logger(__name__)


@dataclass(frozen=True)
class Witness:
    """An asserted atom with no matching assumption, in one canonical form."""
    form: Process
    atom: Atom
    thread: int

    def to_dict(self) -> dict:
        return {
            "form": pretty_print(normalize_names(self.form)),
            "atom": pretty_formula(self.atom),
            "thread": self.thread,
        }


@dataclass
class SafetyReport:
    """
    Attributes:
        safe: No witness in any explored form
        witnesses: Every unmatched assertion found
        explored_forms: Number of canonical forms checked
        unfold_budget_used: Most unfoldings of one replicated process needed
        overcommitted: Atoms asserted at thread heads more often than assumed
    """
    safe: bool
    witnesses: List[Witness] = field(default_factory=list)
    explored_forms: int = 0
    unfold_budget_used: int = 0
    overcommitted: List[Atom] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "safe": self.safe,
            "witnesses": [w.to_dict() for w in self.witnesses],
            "explored_forms": self.explored_forms,
            "unfold_budget_used": self.unfold_budget_used,
            "overcommitted": [pretty_formula(a) for a in self.overcommitted],
        }


def head_atoms(thread: Process) -> List[Atom]:
    """Atoms of the thread's leading assert chain (any of them can be heated to the head)."""
    return assert_chain(thread)[0]


def is_safe_canonical(form: CanonicalProcess) -> Tuple[bool, List[Witness]]:
    """
    Membership check of every leading asserted atom against the assumptions.

    Examples:
        {charge(c,100)} with  assert charge(c,110). 0      -> unsafe
        {}              with  assert charge(c,100). 0      -> unsafe
        {A}             with  assert A. 0 | assert A. 0    -> safe
    """
    witnesses = []
    process = None
    for index, thread in enumerate(form.threads):
        for atom in head_atoms(thread):
            if atom not in form.assumptions:
                if process is None:
                    process = form.to_process()
                witnesses.append(Witness(process, atom, index))
    return not witnesses, witnesses


def _overcommitted(form: CanonicalProcess) -> List[Atom]:
    asserted = Counter(atom for thread in form.threads for atom in head_atoms(thread))
    return [
        atom for atom, count in asserted.items()
        if atom in form.assumptions and count > form.assumptions.count(atom)
    ]


def check_safety(p: Process, unfold_budget: int = 1, workers: int = 1) -> SafetyReport:
    """
    Safety of every canonical form of p within the unfolding budget.

    Args:
        p: Process to check
        unfold_budget: Unfoldings allowed per replicated process
        workers: Threads used to check forms (1 checks inline)

    Returns:
        SafetyReport
    """
    forms, used = explore_canonical_forms(p, unfold_budget)
    if workers > 1 and len(forms) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(is_safe_canonical, forms))
    else:
        results = [is_safe_canonical(form) for form in forms]

    witnesses: List[Witness] = []
    for _, found in results:
        witnesses.extend(found)
    overcommitted: List[Atom] = []
    for form in forms:
        for atom in _overcommitted(form):
            if atom not in overcommitted:
                overcommitted.append(atom)

    report = SafetyReport(
        safe=not witnesses,
        witnesses=witnesses,
        explored_forms=len(forms),
        unfold_budget_used=used,
        overcommitted=overcommitted,
    )
    logger.debug(f"Safety: {'safe' if report.safe else 'unsafe'} over {len(forms)} form(s)")
    return report
