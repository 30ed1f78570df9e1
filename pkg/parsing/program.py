"""
Programs - Parsed .lsp files and macro expansion
================================================

A Program keeps what the source declared: base types, named constants,
type aliases (already resolved to types), process macros, the default
typing context and the main process. Macro bodies and main may still
contain MacroCall nodes; expand_macros() replaces them and yields a pure
process of the calculus.
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Tuple

from core.exceptions import ParseError
from core.logging import get_logger
from syntax import (
    Assert,
    Assume,
    Context,
    Inact,
    Input,
    Output,
    Par,
    Process,
    Repl,
    Restrict,
    Type,
    Value,
    Var,
    fresh,
    freshen,
    substitute,
)
from syntax.terms import Span

from .diagnostics import Diagnostic, error

logger = get_logger(__name__)


@dataclass(frozen=True)
class MacroCall:
    """``Name(v1, ..., vn)`` inside a macro body or main, before expansion."""
    name: str
    args: Tuple[Value, ...] = ()
    span: Span = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Macro:
    """``def Name(params) = body``"""
    name: str
    params: Tuple[str, ...]
    body: Process
    span: Span = field(default=None, compare=False, repr=False)


@dataclass
class Program:
    """
    A parsed program.

    Attributes:
        base_types: Declared base types (always includes unit and nat)
        constants: Named literal -> its base type
        type_aliases: Alias name -> resolved type
        macros: Macro name -> Macro
        context: Default typing context (``context ...;``), possibly empty
        main: The main process, macro calls not yet expanded
        explicit_bases: Whether the source had a ``base`` header
    """
    base_types: Tuple[str, ...]
    constants: Dict[str, str]
    type_aliases: Dict[str, Type]
    macros: Dict[str, Macro]
    context: Context
    main: Process
    explicit_bases: bool = False

    def main_span(self) -> Tuple[int, int]:
        """Span of main, or of the first macro when main was built by hand without one."""
        spans = [getattr(self.main, "span", None)] + [m.span for m in self.macros.values()]
        return next((s for s in spans if s is not None), (0, 1))



# =============================================================================
# Traversals over processes with macro calls
# =============================================================================

def macro_calls(p) -> Iterator[MacroCall]:
    """Every MacroCall in p, in source order."""
    if isinstance(p, MacroCall):
        yield p
    elif isinstance(p, (Output, Input)):
        yield from macro_calls(p.cont)
    elif isinstance(p, Assert):
        yield from macro_calls(p.cont)
    elif isinstance(p, Par):
        yield from macro_calls(p.left)
        yield from macro_calls(p.right)
    elif isinstance(p, (Repl, Restrict, Assume)):
        yield from macro_calls(p.body)


def map_processes(p, fn: Callable[[MacroCall], Process]) -> Process:
    """Rebuild p with every MacroCall replaced by fn(call)."""
    if isinstance(p, MacroCall):
        return fn(p)
    if isinstance(p, Output):
        return Output(p.chan, p.value, map_processes(p.cont, fn), span=p.span)
    if isinstance(p, Input):
        return Input(p.chan, p.binder, map_processes(p.cont, fn), span=p.span)
    if isinstance(p, Par):
        return Par(map_processes(p.left, fn), map_processes(p.right, fn), span=p.span)
    if isinstance(p, Repl):
        return Repl(map_processes(p.body, fn), span=p.span)
    if isinstance(p, Restrict):
        return Restrict(p.x, p.y, p.annot, map_processes(p.body, fn), p.peer, span=p.span)
    if isinstance(p, Assume):
        return Assume(p.formula, map_processes(p.body, fn), span=p.span)
    if isinstance(p, Assert):
        return Assert(p.formula, map_processes(p.cont, fn), span=p.span)
    if isinstance(p, Inact):
        return p
    raise TypeError(f"not a process: {p!r}")


def call_errors(
    macros: Dict[str, Macro], body, fallback: Tuple[int, int], owner: Optional[str] = None
) -> Optional[Diagnostic]:
    """First unknown-macro or arity problem among the calls of body; fallback spans calls without one."""
    for call in macro_calls(body):
        macro = macros.get(call.name)
        span = call.span or fallback
        if macro is None:
            where = f" in {owner}" if owner else ""
            return error(span, "E-UNKNOWN", f"unknown process {call.name}{where}")
        if len(call.args) != len(macro.params):
            return error(
                span,
                "E-ARITY",
                f"{call.name} expects {len(macro.params)} argument(s), got {len(call.args)}",
            )
    return None


def macro_cycles(macros: Dict[str, Macro]) -> List[str]:
    """Names of macros that lie on a cycle of the call graph, in definition order."""
    graph = {name: {c.name for c in macro_calls(m.body) if c.name in macros} for name, m in macros.items()}
    cyclic = []
    for start in macros:
        seen = set()
        stack = list(graph[start])
        while stack:
            name = stack.pop()
            if name == start:
                cyclic.append(start)
                break
            if name in seen:
                continue
            seen.add(name)
            stack.extend(graph[name])
    return cyclic


# =============================================================================
# Expansion
# =============================================================================

class _Expander:
    """Expands calls bottom-up; each macro body is expanded once and freshened per call."""

    def __init__(self, macros: Dict[str, Macro], fallback: Tuple[int, int]):
        self.macros = macros
        self.fallback = fallback
        self.expanded: Dict[str, Process] = {}
        self.stack: List[str] = []

    def _fail(self, call: MacroCall, code: str, message: str) -> ParseError:
        diagnostic = error(call.span or self._enclosing(), code, message)
        return ParseError(message, [diagnostic], {"macro": call.name})

    def _enclosing(self) -> Tuple[int, int]:
        """Span of the macro being expanded, else of main."""
        for name in reversed(self.stack):
            span = self.macros[name].span
            if span is not None:
                return span
        return self.fallback

    def body(self, call: MacroCall) -> Process:

        name = call.name
        if name in self.expanded:
            return self.expanded[name]
        if name in self.stack:
            cycle = " -> ".join(self.stack + [name])
            raise self._fail(call, "E-CYCLE", f"cyclic macro reference {cycle}")
        self.stack.append(name)
        try:
            result = self.process(self.macros[name].body)
        finally:
            self.stack.pop()
        self.expanded[name] = result
        return result

    def call(self, call: MacroCall) -> Process:
        macro = self.macros.get(call.name)
        if macro is None:
            raise self._fail(call, "E-UNKNOWN", f"unknown process {call.name}")
        if len(call.args) != len(macro.params):
            raise self._fail(
                call,
                "E-ARITY",
                f"{call.name} expects {len(macro.params)} argument(s), got {len(call.args)}",
            )
        body = freshen(self.body(call))
        # Simultaneous substitution: parameters go through fresh names first
        # so an argument mentioning another parameter's name is left alone.
        temps = [fresh(param) for param in macro.params]
        for param, temp in zip(macro.params, temps):
            body = substitute(body, param, Var(temp))
        for temp, arg in zip(temps, call.args):
            body = substitute(body, temp, arg)
        logger.debug(f"Expanded {call.name} with {len(call.args)} argument(s)")
        return body

    def process(self, p) -> Process:
        return map_processes(p, self.call)


def expand_macros(program: Program) -> Process:
    """
    Expand every macro call in main.

    Arguments are values substituted for the parameters without capture;
    binders of the macro body are freshened per call site. Aliases were
    already replaced by their types while parsing.

    Args:
        program: A successfully parsed program

    Returns:
        The main process without macro calls

    Raises:
        ParseError: E-ARITY, E-CYCLE or E-UNKNOWN for programs built by hand
    """
    return _Expander(program.macros, program.main_span()).process(program.main)
