"""
Reduction - Communication and assertion steps
=============================================

Each step heats the process to canonical form, collects the redexes and
fires one of them:
- Com: a thread sending on one endpoint of a restriction meets a thread
  receiving on the other; the receiver continues with the value
  substituted and the restriction's annotation moves on to the
  continuation type, itself instantiated with the value
- AssertCut: an asserted atom at the head of a thread meets a matching
  top-level assumption; both disappear

Replicated senders and receivers take part by spawning a fresh copy of
their body in front of themselves. The result is read back as a process
without further heating.
"""

import random
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple, Union

from core.config import POLICIES
from core.exceptions import LinsessError, SortError
from core.logging import get_logger
from parsing.printer import pretty_formula, pretty_print, pretty_value
from syntax import (
    Atom,
    Direction,
    Inact,
    Input,
    Output,
    Process,
    Repl,
    Session,
    Var,
    base_name,
    freshen,
    normalize_names,
    substitute,
    unfold_head,
)

from .canonical import CanonicalProcess, assert_chain, build_chain, canonicalize
from .safety import SafetyReport, check_safety

logger = get_logger(__name__)


@dataclass(frozen=True)
class Com:
    """Communication on restriction ``restriction`` from thread sender to thread receiver."""
    restriction: int
    sender: int
    receiver: int
    label: str = ""

    rule = "Com"


@dataclass(frozen=True)
class AssertCut:
    """The atom at position of thread's assert chain meets an assumption."""
    thread: int
    position: int
    atom: Atom
    label: str = ""

    rule = "Assert"


Redex = Union[Com, AssertCut]


class Verdict(str, Enum):
    TERMINATED_CLEAN = "terminated-clean"
    STUCK_ASSERT = "stuck-assert"
    STUCK_IO = "stuck-io"
    STEP_LIMIT = "step-limit"


def _active(thread: Process) -> Process:
    """The prefix a thread offers: itself, or the body of a replicated thread."""
    return thread.body if isinstance(thread, Repl) else thread


def _display(value) -> str:
    """Value for labels, bound names shown by their base name."""
    if isinstance(value, Var):
        return base_name(value.name)
    return pretty_value(normalize_names(value))


# =============================================================================
# Redexes
# =============================================================================

def _com_redexes(form: CanonicalProcess) -> List[Com]:
    found = []
    for k, (x, y, t) in enumerate(form.restrictions):
        try:
            head = unfold_head(t)
        except LinsessError:
            continue
        if not isinstance(head, Session):
            continue
        sender_chan, receiver_chan = (x, y) if head.dir is Direction.OUT else (y, x)
        for i, sender in enumerate(form.threads):
            out = _active(sender)
            if not isinstance(out, Output) or out.chan != sender_chan:
                continue
            for j, receiver in enumerate(form.threads):
                inp = _active(receiver)
                if i == j or not isinstance(inp, Input) or inp.chan != receiver_chan:
                    continue
                try:
                    substitute(inp.cont, inp.binder, out.value)
                except SortError:
                    continue
                label = f"{base_name(sender_chan)}->{base_name(receiver_chan)} {_display(out.value)}"
                found.append(Com(k, i, j, label))
    return found


def _assert_redexes(form: CanonicalProcess) -> List[AssertCut]:
    found = []
    for i, thread in enumerate(form.threads):
        atoms, _ = assert_chain(_active(thread))
        for position, atom in enumerate(atoms):
            if atom in form.assumptions:
                found.append(AssertCut(i, position, atom, pretty_formula(normalize_names(atom))))
    return found


def _order(redex: Redex) -> Tuple[int, int, int, int]:
    """Leftmost thread first; on the same thread a communication precedes an assertion."""
    if isinstance(redex, Com):
        return (min(redex.sender, redex.receiver), 0, max(redex.sender, redex.receiver), redex.restriction)
    return (redex.thread, 1, redex.position, 0)


def find_redexes(form: CanonicalProcess) -> List[Redex]:
    """All redexes of a canonical form, ordered by the leftmost thread they involve."""
    return sorted(_com_redexes(form) + _assert_redexes(form), key=_order)



# =============================================================================
# Firing
# =============================================================================

def _take(thread: Process) -> Tuple[Process, Optional[Process]]:
    """(prefix to fire, replicated thread to keep or None)."""
    if isinstance(thread, Repl):
        return freshen(thread.body), thread
    return thread, None


def _place(threads: List[Process], index: int, result: Process, keep: Optional[Process]) -> None:
    threads[index] = [result, keep] if keep is not None else [result]


def fire(form: CanonicalProcess, redex: Redex) -> Process:
    """Apply one redex and read the result back as a process."""
    slots: List = [[t] for t in form.threads]
    restrictions = list(form.restrictions)
    assumptions = form.assumptions

    if isinstance(redex, Com):
        x, y, t = restrictions[redex.restriction]
        sender, keep_sender = _take(form.threads[redex.sender])
        receiver, keep_receiver = _take(form.threads[redex.receiver])
        head = unfold_head(t)
        restrictions[redex.restriction] = (x, y, substitute(head.cont, head.binder, sender.value))
        _place(slots, redex.sender, sender.cont, keep_sender)
        _place(slots, redex.receiver, substitute(receiver.cont, receiver.binder, sender.value), keep_receiver)
    else:
        thread, keep = _take(form.threads[redex.thread])
        atoms, rest = assert_chain(thread)
        atoms = atoms[:redex.position] + atoms[redex.position + 1:]
        assumptions = assumptions.remove(redex.atom)
        _place(slots, redex.thread, build_chain(atoms, rest), keep)

    threads = tuple(t for group in slots for t in group)
    return CanonicalProcess(tuple(restrictions), assumptions, threads).to_process()


def reduce_step(
    p: Process, policy: str = "leftmost", rng: Optional[random.Random] = None
) -> Optional[Tuple[Process, Redex]]:
    """
    One reduction step, or None when p has no redex.

    Args:
        p: Process
        policy: "leftmost" or "random"
        rng: Random source for the random policy

    Returns:
        (next process, fired redex) or None
    """
    form = canonicalize(p)
    redexes = find_redexes(form)
    if not redexes:
        return None
    redex = _choose(redexes, policy, rng)
    return fire(form, redex), redex


def _choose(redexes: List[Redex], policy: str, rng: Optional[random.Random]) -> Redex:
    if policy == "leftmost":
        return redexes[0]
    if policy == "random":
        return (rng or random.Random(0)).choice(redexes)
    raise ValueError(f"unknown policy {policy!r}; expected one of {', '.join(POLICIES)}")


# =============================================================================
# Runs
# =============================================================================

@dataclass(frozen=True)
class TraceStep:
    index: int
    redex: Redex
    process: Process

    def line(self) -> str:
        text = pretty_print(normalize_names(self.process))
        return f"step {self.index}: {self.redex.rule} {self.redex.label} |- {text}"

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "rule": self.redex.rule,
            "label": self.redex.label,
            "process": pretty_print(normalize_names(self.process)),
        }


@dataclass
class Trace:
    """
    Attributes:
        steps: Fired steps, each with the process it produced
        terminal: Canonical read-back of the last process
        verdict: How the run ended
        safety: Safety of the terminal process
    """
    steps: List[TraceStep]
    terminal: Process
    verdict: Verdict
    safety: SafetyReport

    def to_lines(self) -> List[str]:
        return [step.line() for step in self.steps]

    def to_dict(self) -> dict:
        return {
            "steps": [step.to_dict() for step in self.steps],
            "terminal": pretty_print(normalize_names(self.terminal)),
            "verdict": self.verdict.value,
            "safety": self.safety.to_dict(),
        }


def _verdict(form: CanonicalProcess, safety: SafetyReport) -> Verdict:
    if any(assert_chain(thread)[0] for thread in form.threads):
        return Verdict.STUCK_ASSERT
    if all(isinstance(thread, (Inact, Repl)) for thread in form.threads):
        return Verdict.TERMINATED_CLEAN if safety.safe else Verdict.STUCK_ASSERT
    return Verdict.STUCK_IO


def run(
    p: Process,
    max_steps: int = 1000,
    policy: str = "leftmost",
    seed: int = 0,
    unfold_budget: int = 1,
) -> Trace:
    """
    Reduce until no redex remains or max_steps steps have fired.

    Verdicts: terminated-clean (only 0 and replicated threads left, and the
    rest is safe), stuck-assert (an assertion no assumption matches),
    stuck-io (blocked communication only), step-limit.

    Args:
        p: Process
        max_steps: Upper bound on fired steps
        policy: "leftmost" or "random"
        seed: Seed for the random policy
        unfold_budget: Budget for the safety check of the terminal process

    Returns:
        Trace
    """
    if max_steps < 0:
        raise ValueError("max_steps must be >= 0")
    rng = random.Random(seed)
    steps: List[TraceStep] = []
    current = p
    limited = False
    while True:
        form = canonicalize(current)
        redexes = find_redexes(form)
        if not redexes:
            break
        if len(steps) >= max_steps:
            limited = True
            break
        redex = _choose(redexes, policy, rng)
        current = fire(form, redex)
        steps.append(TraceStep(len(steps) + 1, redex, current))
        logger.debug(f"step {len(steps)}: {redex.rule} {redex.label}")

    terminal = canonicalize(current)
    safety = check_safety(current, unfold_budget)
    verdict = Verdict.STEP_LIMIT if limited else _verdict(terminal, safety)
    logger.info(f"Run ended after {len(steps)} step(s): {verdict.value}")
    return Trace(steps, terminal.to_process(), verdict, safety)
