"""
Type Checker - Syntax-directed checking by context threading
============================================================

One pass over the process, threading a ThreadedContext:
- values and formulae consume the linear entries they use
- parallel composition checks the left thread, then the right thread
  on what is left
- every construct that extends the context closes that extension when
  its continuation is done: an appended linear binding or formula that
  was never used up is an error there (E-SPLIT)
- the top level finally requires the live residual to be unrestricted
  and free of formulae (E-UNQUAL)

Refinements and formula connectives are eliminated on entry (cf), so the
context only ever holds plain bindings and atomic formulae.
"""

from collections import Counter
from dataclasses import dataclass, field
from typing import List, Optional

from core.exceptions import LinsessError, TypeCheckError
from core.logging import get_logger
from parsing.printer import pretty_context, pretty_formula, pretty_process, pretty_type, pretty_value
from parsing.program import Program, expand_macros
from syntax import (
    Assert,
    Assume,
    Binding,
    Context,
    Direction,
    Formula,
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
    Value,
    Var,
    cf,
    cf_binding,
    cf_formula,
    dual,
    erase,
    erase_type,
    flatten_formula,
    free_vars,
    fresh,
    is_unrestricted_unfolded,
    rename,
    substitute,
    type_equivalent,
    unfold_head,
)

from .context import ThreadedContext, context_update, is_linear_entry
from .wellformed import wf_context, wf_formula, wf_type

logger = get_logger(__name__)

NAT = UnitT("nat")
UNIT = UnitT("unit")


@dataclass
class CheckResult:
    """
    Outcome of checking a whole process.

    Attributes:
        accepted: Whether the process is typable
        errors: The rejection, if any (one primary error)
        residual: Live entries left over on acceptance
    """
    accepted: bool
    errors: List[TypeCheckError] = field(default_factory=list)
    residual: Optional[Context] = None

    def to_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "errors": [e.to_dict() for e in self.errors],
            "residual": pretty_context(self.residual) if self.residual is not None else None,
        }


def _fail(code: str, explanation: str, context: ThreadedContext, node=None) -> TypeCheckError:
    span = getattr(node, "span", None)
    return TypeCheckError(code, explanation, span=span, context_slice=context.describe())


# =============================================================================
# Formulae and values
# =============================================================================

def prove_formula(context: ThreadedContext, formula: Formula) -> ThreadedContext:
    """
    Consume one live atom for every atom of the flattened formula.

    The latest matching atom is used; all copies of an atom are
    interchangeable. ``1`` needs nothing.

    Raises:
        TypeCheckError: E-FORMULA listing the missing atoms with multiplicities
    """
    needed = flatten_formula(formula)
    result = context
    missing = Counter()
    for atom in needed:
        for index in range(len(result.slots) - 1, -1, -1):
            slot = result.slots[index]
            if not slot.consumed and isinstance(slot.entry, Resource) and slot.entry.formula == atom:
                result = result.consume(index)
                break
        else:
            missing[atom] += 1
    if missing:
        available = Counter(
            e.formula for e in context.live() if isinstance(e, Resource)
        )
        parts = [
            f"{pretty_formula(atom)} (need {needed.count(atom)}, have {available[atom]})"
            for atom in sorted(missing, key=pretty_formula)
        ]
        raise TypeCheckError(
            "E-FORMULA",
            f"cannot prove {pretty_formula(formula)}: missing {', '.join(parts)}",
            context_slice=context.describe(),
        )
    return result


def check_value(context: ThreadedContext, value: Value, t: Type) -> ThreadedContext:
    """
    ``context |- value : t``, consuming what the value uses.

    For a refinement ``{x:U | F}`` the formula ``F[value/x]`` is proved first
    and the value is then checked against U on what remains.

    Raises:
        TypeCheckError: E-MISMATCH, E-FORMULA, E-SPLIT or E-WF
    """
    if isinstance(t, Refined):
        context = prove_formula(context, substitute(t.formula, t.binder, value))
        return check_value(context, value, t.base)

    if isinstance(value, Var):
        found = context.lookup(value.name)
        if found is None:
            raise _fail("E-WF", f"{value.name} is not in scope", context)
        index, slot = found
        if slot.consumed:
            raise _fail("E-SPLIT", f"{value.name} was already used by another part of the process", context)
        bound = slot.entry.type
        try:
            same = type_equivalent(bound, t)
        except LinsessError:
            same = False
        if not same:
            raise _fail(
                "E-MISMATCH",
                f"{value.name} has type {pretty_type(bound)}, expected {pretty_type(t)}",
                context,
            )
        if not is_unrestricted_unfolded(bound):
            context = context.consume(index)
        return context

    if isinstance(value, UnitValue):
        if t != UNIT:
            raise _fail("E-MISMATCH", f"() has type unit, expected {pretty_type(t)}", context)
        return context

    if isinstance(value, Literal):
        if not (isinstance(t, UnitT) and t.name == value.base):
            raise _fail(
                "E-MISMATCH",
                f"{pretty_value(value)} has type {value.base}, expected {pretty_type(t)}",
                context,
            )
        return context

    if isinstance(value, Sum):
        if t != NAT:
            raise _fail("E-MISMATCH", f"{pretty_value(value)} has type nat, expected {pretty_type(t)}", context)
        context = check_value(context, value.left, NAT)
        return check_value(context, value.right, NAT)

    raise TypeError(f"not a value: {value!r}")


# =============================================================================
# Processes
# =============================================================================

class _ProcessChecker:
    """Walks a process; see the module docstring for the threading discipline."""

    def close(self, context: ThreadedContext, mark: int, node) -> ThreadedContext:
        """Require everything appended since mark to be used up, then drop it."""
        for slot in context.slots[mark:]:
            if slot.consumed or not is_linear_entry(slot.entry):
                continue
            entry = slot.entry
            if isinstance(entry, Resource):
                message = f"formula {pretty_formula(entry.formula)} is never asserted"
            else:
                message = f"{entry.name} : {pretty_type(entry.type)} is never used up"
            raise _fail("E-SPLIT", message, context, node)
        logger.debug(f"Closed scope of {type(node).__name__} ({len(context) - mark} entries)")
        return context.truncate(mark)

    def channel(self, context: ThreadedContext, node, direction: Direction):
        """Resolve node.chan to a session with the given direction; consume it if linear."""
        found = context.lookup(node.chan)
        if found is None:
            raise _fail("E-WF", f"channel {node.chan} is not in scope", context, node)
        index, slot = found
        if slot.consumed:
            raise _fail("E-SPLIT", f"channel {node.chan} was already used by another part of the process", context, node)
        bound = slot.entry.type
        try:
            head = unfold_head(bound)
        except LinsessError:
            head = bound
        if not isinstance(head, Session) or head.dir is not direction:
            verb = "send on" if direction is Direction.OUT else "receive on"
            raise _fail(
                "E-NOTSESSION",
                f"cannot {verb} {node.chan} : {pretty_type(bound)}",
                context,
                node,
            )
        if not is_unrestricted_unfolded(bound):
            context = context.consume(index)
        return context, head

    def process(self, context: ThreadedContext, p: Process) -> ThreadedContext:
        try:
            return self._process(context, p)
        except TypeCheckError as exc:
            if exc.span is None and getattr(p, "span", None) is not None:
                raise TypeCheckError(exc.code, exc.explanation, p.span, exc.context_slice) from None
            raise

    def _process(self, context: ThreadedContext, p: Process) -> ThreadedContext:
        if isinstance(p, Inact):
            return context

        if isinstance(p, Par):
            context = self.process(context, p.left)
            return self.process(context, p.right)

        if isinstance(p, Repl):
            for entry in context.live():
                if is_linear_entry(entry) and isinstance(entry, Binding) and entry.name in free_vars(p.body):
                    raise _fail(
                        "E-UNQUAL",
                        f"replicated process uses linear {entry.name} : {pretty_type(entry.type)}",
                        context,
                        p,
                    )
            self.process(context.sealed(), p.body)
            return context

        if isinstance(p, Restrict):
            wf_type(context, p.annot)
            if p.peer is not None:
                wf_type(context, p.peer)
            peer = dual(p.annot)
            if peer is None:
                raise _fail("E-DUAL", f"{pretty_type(p.annot)} has no dual", context, p)
            if p.peer is not None and not type_equivalent(p.peer, peer):
                raise _fail(
                    "E-DUAL",
                    f"the types of {p.x} and {p.y} are not dual: {pretty_type(p.annot)} and {pretty_type(p.peer)}",
                    context,
                    p,
                )
            x, y, body = p.x, p.y, p.body
            taken = context.names()
            if x in taken:
                x = fresh(x)
                body = rename(body, p.x, x)
            if y in taken or y == x:
                y = fresh(y)
                body = rename(body, p.y, y)
            mark = len(context)
            inner = context.append(Binding(x, p.annot), Binding(y, peer))
            return self.close(self.process(inner, body), mark, p)

        if isinstance(p, Output):
            context, head = self.channel(context, p, Direction.OUT)
            context = check_value(context, p.value, head.payload)
            mark = len(context)
            context = context_update(context, p.chan, substitute(head.cont, head.binder, p.value))
            return self.close(self.process(context, p.cont), mark, p)

        if isinstance(p, Input):
            context, head = self.channel(context, p, Direction.IN)
            z, cont = p.binder, p.cont
            if z in context.names():
                z = fresh(z)
                cont = rename(cont, p.binder, z)
            mark = len(context)
            context = context.append(*cf_binding(z, head.payload))
            context = context_update(context, p.chan, substitute(head.cont, head.binder, Var(z)))
            return self.close(self.process(context, cont), mark, p)

        if isinstance(p, Assume):
            wf_formula(context, p.formula)
            mark = len(context)
            inner = context.append(*cf_formula(p.formula))
            return self.close(self.process(inner, p.body), mark, p)

        if isinstance(p, Assert):
            context = prove_formula(context, p.formula)
            return self.process(context, p.cont)

        raise TypeError(f"not a process: {p!r}")


def check_process(context: ThreadedContext, p: Process) -> ThreadedContext:
    """
    ``context |- p``, returning the residual context.

    Leaf conditions are left to the caller: the residual may still hold
    live linear entries of the incoming context.

    Raises:
        TypeCheckError: With the span of the offending process node
    """
    return _ProcessChecker().process(context, p)


def typecheck_process(p: Process, context: Optional[Context] = None) -> CheckResult:
    """
    Check a closed process under a context.

    The context is checked for well-formedness and normalized with cf; the
    final residual must be unrestricted and hold no formulae.

    Args:
        p: Process without macro calls
        context: Typing context (empty by default)

    Returns:
        CheckResult
    """
    context = context or Context()
    try:
        wf_context(context)
        residual = check_process(ThreadedContext.of(cf(context)), p)
        for entry in residual.live():
            if is_linear_entry(entry):
                if isinstance(entry, Resource):
                    message = f"formula {pretty_formula(entry.formula)} is left unused"
                else:
                    message = f"{entry.name} : {pretty_type(entry.type)} is left unused"
                raise TypeCheckError("E-UNQUAL", message, context_slice=residual.describe())
    except TypeCheckError as exc:
        logger.info(f"Rejected: {exc.code}")
        logger.debug(f"Rejected {pretty_process(p)}: {exc}")
        return CheckResult(False, [exc], None)
    logger.info("Accepted")
    return CheckResult(True, [], residual.to_context())


def typecheck(program: Program, context: Optional[Context] = None) -> CheckResult:
    """
    Check a program's main process.

    Args:
        program: Parsed program; macros are expanded here
        context: Overrides the program's declared context

    Returns:
        CheckResult
    """
    main = expand_macros(program)
    return typecheck_process(main, context if context is not None else program.context)


def erase_context(context: Context) -> Context:
    """Refinements erased from bindings; formulae dropped."""
    return Context(tuple(Binding(e.name, erase_type(e.type)) for e in context if isinstance(e, Binding)))


def check_program_erased(program: Program, context: Optional[Context] = None) -> CheckResult:
    """typecheck with every assume, assert and refinement erased first."""
    main = erase(expand_macros(program))
    return typecheck_process(main, erase_context(context if context is not None else program.context))
