"""
Parser - Source text to Program
===============================

Parsing runs in three passes over the lark tree:
1. headers: ``base`` and ``const`` declarations, so literals and type
   names resolve regardless of declaration order
2. definitions: every alias, macro, context and main is built separately,
   so each definition reports at most one diagnostic
3. resolution: type names become aliases, rec variables or base types,
   and macro calls are checked for existence, arity and cycles

All diagnostics are collected and raised together as one ParseError.
"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from lark import Token, Transformer, Tree, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken, VisitError

from core.exceptions import ParseError
from core.logging import get_logger
from syntax import (
    Assert,
    Assume,
    Atom,
    Binding,
    Context,
    Direction,
    End,
    Inact,
    Input,
    Literal,
    One,
    Output,
    Par,
    Qualifier,
    Rec,
    Refined,
    Repl,
    Resource,
    Restrict,
    Session,
    Tensor,
    TVar,
    Type,
    UnitT,
    UnitValue,
    Var,
    fresh,
    has_recursive_refinement,
    is_contractive,
    make_sum,
)
from syntax.terms import Span

from .diagnostics import Diagnostic, SourceOffsets, error
from .grammar import get_parser
from .program import Macro, MacroCall, Program, call_errors, macro_cycles

logger = get_logger(__name__)

BUILTIN_BASES = ("unit", "nat")


@dataclass(frozen=True)
class TypeRef:
    """A type name before resolution (alias, rec variable or base type)."""
    name: str
    span: Span = field(default=None, compare=False)


class _DefinitionError(Exception):
    """
    Aborts the current definition with one diagnostic. A finding without
    a span of its own is placed on the enclosing definition.
    """

    def __init__(self, span: Span, code: str, message: str):
        self.span = span
        self.code = code
        self.message = message
        super().__init__(message)

    def located(self, fallback: Tuple[int, int]) -> Diagnostic:
        return error(self.span or fallback, self.code, self.message)



# =============================================================================
# Tree -> terms
# =============================================================================

@v_args(meta=True)
class _Builder(Transformer):
    """
    Builds terms from the parse tree.

    Type names are left as TypeRef; literals are resolved against the
    constant table immediately.
    """

    def __init__(self, offsets: SourceOffsets, constants: Dict[str, str], bases: Optional[Set[str]]):
        super().__init__()
        self.offsets = offsets
        self.constants = constants
        self.bases = bases

    def _span(self, meta) -> Span:
        if getattr(meta, "empty", True):
            return None
        return self.offsets.span(meta.start_pos, meta.end_pos)

    def _token_span(self, token: Token) -> Tuple[int, int]:
        return self.offsets.span(token.start_pos, token.end_pos)

    def _fail(self, span: Span, code: str, message: str):
        raise _DefinitionError(span, code, message)

    # -- items --------------------------------------------------------------

    def program(self, meta, children):
        return children

    def base_decl(self, meta, children):
        return ("base", list(children), self._span(meta))

    def const_item(self, meta, children):
        name, base = children
        return (name, str(base))

    def const_decl(self, meta, children):
        return ("const", list(children), self._span(meta))

    def type_decl(self, meta, children):
        name, t = children
        return ("type", str(name), t, self._span(meta))

    def params(self, meta, children):
        return [token for token in children if token is not None]

    def def_decl(self, meta, children):
        name, params, body = children
        seen = set()
        for param in params:
            if str(param) in seen:
                self._fail(self._token_span(param), "E-DUPLICATE", f"parameter {param} of {name} declared twice")
            seen.add(str(param))
        return ("def", str(name), tuple(str(p) for p in params), body, self._span(meta))

    def context_decl(self, meta, children):
        entries = children[0] if children and children[0] is not None else []
        return ("context", entries, self._span(meta))

    def main_decl(self, meta, children):
        return ("main", children[0], self._span(meta))

    def context_file(self, meta, children):
        return children[0] if children and children[0] is not None else []

    def entries(self, meta, children):
        return [c if isinstance(c, Binding) else Resource(c) for c in children]

    def binding(self, meta, children):
        name, t = children
        return Binding(str(name), t)

    # -- processes ----------------------------------------------------------

    def par(self, meta, children):
        left, right = children
        return Par(left, right, span=self._span(meta))

    def send(self, meta, children):
        chan, value, cont = children
        return Output(str(chan), value, cont, span=self._span(meta))

    def receive(self, meta, children):
        chan, binder, cont = children
        return Input(str(chan), str(binder), cont, span=self._span(meta))

    def repl(self, meta, children):
        return Repl(children[0], span=self._span(meta))

    def inact(self, meta, children):
        return Inact(span=self._span(meta))

    def restrict(self, meta, children):
        x, y, annot, peer, body = children
        if str(x) == str(y):
            self._fail(self._span(meta), "E-DUPLICATE", f"restriction binds {x} twice")
        return Restrict(str(x), str(y), annot, body, peer, span=self._span(meta))

    def assume(self, meta, children):
        formula, body = children
        return Assume(formula, body, span=self._span(meta))

    def assert_(self, meta, children):
        formula, cont = children
        return Assert(formula, cont, span=self._span(meta))

    def call(self, meta, children):
        name, *args = children
        return MacroCall(str(name), tuple(a for a in args if a is not None), span=self._span(meta))

    # -- types --------------------------------------------------------------

    def qual(self, meta, children):
        return Qualifier(str(children[0]))

    def _session(self, direction, children, named: bool):
        if named:
            q, binder, payload, cont = children
            binder = str(binder)
        else:
            q, payload, cont = children
            binder = fresh("_")
        return Session(q, direction, binder, payload, cont)

    def out_named(self, meta, children):
        return self._session(Direction.OUT, children, True)

    def out_anon(self, meta, children):
        return self._session(Direction.OUT, children, False)

    def in_named(self, meta, children):
        return self._session(Direction.IN, children, True)

    def in_anon(self, meta, children):
        return self._session(Direction.IN, children, False)

    def rec(self, meta, children):
        name, body = children
        return Rec(str(name), body)

    def unit_type(self, meta, children):
        return UnitT("unit")

    def end_type(self, meta, children):
        return End()

    def type_ref(self, meta, children):
        return TypeRef(str(children[0]), span=self._span(meta))

    def refined(self, meta, children):
        binder, base, formula = children
        return Refined(str(binder), base, formula)

    # -- formulae and values -------------------------------------------------

    def one(self, meta, children):
        return One()

    def atom(self, meta, children):
        predicate, *args = children
        return Atom(str(predicate), tuple(a for a in args if a is not None))

    def tensor(self, meta, children):
        left, right = children
        return Tensor(left, right)

    def sum(self, meta, children):
        left, right = children
        return make_sum(left, right)

    def var(self, meta, children):
        return Var(str(children[0]))

    def nat_lit(self, meta, children):
        return Literal(int(children[0]), "nat")

    def unit_value(self, meta, children):
        return UnitValue()

    def base_lit(self, meta, children):
        token = children[0]
        text = str(token)[1:-1]
        if ":" in text:
            constant, base = text.split(":", 1)
            if self.bases is not None and base not in self.bases:
                self._fail(self._token_span(token), "E-UNKNOWN", f"unknown base type {base} in literal {token}")
            return Literal(constant, base)
        base = self.constants.get(text)
        if base is None:
            self._fail(
                self._token_span(token),
                "E-UNKNOWN",
                f"undeclared constant {text}; declare it with const or write `{text}:<base>`",
            )
        return Literal(text, base)


# =============================================================================
# Name resolution
# =============================================================================

class _Resolver:
    """
    Resolves TypeRef placeholders.

    A name is, in order of preference: a rec variable in scope, a type
    alias, a base type. Aliases are resolved lazily so they may be
    declared in any order; a cyclic alias chain is E-CYCLE.
    """

    def __init__(self, raw_aliases: Dict[str, Tuple[Type, Span]], resolved: Dict[str, Type], bases: Optional[Set[str]]):
        self.raw = raw_aliases
        self.resolved = dict(resolved)
        self.bases = bases
        self.resolving: List[str] = []

    def alias(self, name: str, span: Span) -> Type:
        if name in self.resolved:
            return self.resolved[name]
        if name in self.resolving:
            chain = " -> ".join(self.resolving[self.resolving.index(name):] + [name])
            raise _DefinitionError(span, "E-CYCLE", f"cyclic type alias {chain}")
        self.resolving.append(name)
        try:
            raw, alias_span = self.raw[name]
            t = self.type(raw, frozenset())
            check_recursion(t, alias_span)
        finally:
            self.resolving.pop()
        self.resolved[name] = t
        return t

    def type(self, t, bound: FrozenSet[str]) -> Type:
        if isinstance(t, TypeRef):
            if t.name in bound:
                return TVar(t.name)
            if t.name in self.raw or t.name in self.resolved:
                return self.alias(t.name, t.span)
            if t.name in BUILTIN_BASES or self.bases is None or t.name in self.bases:
                return UnitT(t.name)
            raise _DefinitionError(t.span, "E-UNKNOWN", f"unknown type {t.name}")
        if isinstance(t, Session):
            return Session(t.q, t.dir, t.binder, self.type(t.payload, bound), self.type(t.cont, bound))
        if isinstance(t, Refined):
            return Refined(t.binder, self.type(t.base, bound), t.formula)
        if isinstance(t, Rec):
            return Rec(t.name, self.type(t.body, bound | {t.name}))
        return t

    def annotation(self, t, span: Span) -> Type:
        result = self.type(t, frozenset())
        check_recursion(result, span)
        return result

    def process(self, p):
        return _resolve_process(p, self)

    def context(self, entries, span: Span) -> Context:
        result = []
        for entry in entries:
            if isinstance(entry, Binding):
                result.append(Binding(entry.name, self.annotation(entry.type, span)))
            else:
                result.append(entry)
        return Context(tuple(result))


def _resolve_process(p, resolver: _Resolver):
    if isinstance(p, Restrict):
        annot = resolver.annotation(p.annot, p.span)
        peer = resolver.annotation(p.peer, p.span) if p.peer is not None else None
        return Restrict(p.x, p.y, annot, _resolve_process(p.body, resolver), peer, span=p.span)
    if isinstance(p, MacroCall):
        return p
    if isinstance(p, Output):
        return Output(p.chan, p.value, _resolve_process(p.cont, resolver), span=p.span)
    if isinstance(p, Input):
        return Input(p.chan, p.binder, _resolve_process(p.cont, resolver), span=p.span)
    if isinstance(p, Par):
        return Par(_resolve_process(p.left, resolver), _resolve_process(p.right, resolver), span=p.span)
    if isinstance(p, Repl):
        return Repl(_resolve_process(p.body, resolver), span=p.span)
    if isinstance(p, Assume):
        return Assume(p.formula, _resolve_process(p.body, resolver), span=p.span)
    if isinstance(p, Assert):
        return Assert(p.formula, _resolve_process(p.cont, resolver), span=p.span)
    return p


def check_recursion(t: Type, span: Span) -> None:
    """Contractivity and no refinement directly under rec."""
    if not is_contractive(t):
        raise _DefinitionError(span, "E-CONTRACT", "type is not contractive (rec a1. ... rec an. a1)")
    if has_recursive_refinement(t):
        raise _DefinitionError(span, "E-RECREF", "a refinement may not appear directly under rec")


# =============================================================================
# Entry points
# =============================================================================

def _syntax_diagnostic(exc: UnexpectedInput, offsets: SourceOffsets) -> Diagnostic:
    source = offsets.source
    start = getattr(exc, "pos_in_stream", None)
    end = None
    token = getattr(exc, "token", None)
    if isinstance(exc, UnexpectedToken) and token is not None and getattr(token, "start_pos", None) is not None:
        start, end = token.start_pos, token.end_pos
    if start is None:
        start = len(source)
    if end is None or end <= start:
        end = start + 1

    if isinstance(exc, UnexpectedEOF) or (isinstance(exc, UnexpectedToken) and token is not None and token.type == "$END"):
        found = "end of input"
    elif isinstance(exc, UnexpectedCharacters):
        found = f"character {source[start]!r}" if start < len(source) else "end of input"
    elif token is not None:
        found = f"{str(token)!r}"
    else:
        found = "input"

    expected = sorted(getattr(exc, "expected", None) or getattr(exc, "allowed", None) or [])
    message = f"unexpected {found}"
    if expected:
        shown = ", ".join(expected[:8])
        message += f"; expected one of: {shown}" + (", ..." if len(expected) > 8 else "")
    return error(offsets.span(start, end), "E-SYNTAX", message)


def _parse_tree(source: str, start: str, offsets: SourceOffsets) -> Tree:
    try:
        return get_parser().parse(source, start=start)
    except UnexpectedInput as exc:
        diagnostic = _syntax_diagnostic(exc, offsets)
        logger.debug(f"Syntax error: {diagnostic}")
        raise ParseError(f"syntax error: {diagnostic.message}", [diagnostic]) from None


def _build(builder: _Builder, tree: Tree):
    """Transform one definition; lark wraps callback exceptions in VisitError."""
    try:
        return builder.transform(tree)
    except VisitError as exc:
        if isinstance(exc.orig_exc, _DefinitionError):
            raise exc.orig_exc from None
        raise


def _scan_headers(items: List[Tree], offsets: SourceOffsets, diagnostics: List[Diagnostic]):
    builder = _Builder(offsets, {}, None)
    declared: List[str] = []
    explicit = False
    const_items = []
    for item in items:
        if item.data == "base_decl":
            explicit = True
            _, names, span = builder.transform(item)
            for token in names:
                if str(token) in declared:
                    diagnostics.append(
                        error(builder._token_span(token), "E-DUPLICATE", f"base type {token} declared twice")
                    )
                    break
                declared.append(str(token))
        elif item.data == "const_decl":
            _, pairs, span = builder.transform(item)
            const_items.append((pairs, span))

    bases = set(declared) | set(BUILTIN_BASES) if explicit else None
    constants: Dict[str, str] = {}
    for pairs, span in const_items:
        for token, base in pairs:
            name = str(token)
            if name in constants:
                diagnostics.append(error(builder._token_span(token), "E-DUPLICATE", f"constant {name} declared twice"))
                break
            if bases is not None and base not in bases:
                diagnostics.append(error(builder._token_span(token), "E-UNKNOWN", f"unknown base type {base} for constant {name}"))
                break
            constants[name] = base
    return declared, bases, constants


def parse_program(source: str) -> Program:
    """
    Parse a complete .lsp program.

    Args:
        source: Program text

    Returns:
        The parsed Program (macro calls in main not yet expanded)

    Raises:
        ParseError: With every diagnostic found, in source order

    Example:
        >>> program = parse_program("main = s1!`p:product`. 0")
        >>> program.main
        Output(chan='s1', value=Literal(constant='p', base='product'), cont=Inact())
    """
    offsets = SourceOffsets(source)
    tree = _parse_tree(source, "program", offsets)
    items: List[Tree] = list(tree.children)
    diagnostics: List[Diagnostic] = []
    whole = offsets.span(0, offsets.size)

    declared, bases, constants = _scan_headers(items, offsets, diagnostics)
    builder = _Builder(offsets, constants, bases)

    raw_aliases: Dict[str, Tuple[Type, Span]] = {}
    macros: Dict[str, Macro] = {}
    context_entries = None
    context_span: Span = None
    main = None
    main_span: Span = None

    for item in items:
        if item.data in ("base_decl", "const_decl"):
            continue
        try:
            built = _build(builder, item)
        except _DefinitionError as exc:
            diagnostics.append(exc.located(builder._span(item.meta) or whole))
            continue
        kind = built[0]
        if kind == "type":
            _, name, t, span = built
            if name in raw_aliases or name in declared or name in BUILTIN_BASES:
                diagnostics.append(error(span, "E-DUPLICATE", f"type {name} defined twice"))
            else:
                raw_aliases[name] = (t, span)
        elif kind == "def":
            _, name, params, body, span = built
            if name in macros:
                diagnostics.append(error(span, "E-DUPLICATE", f"process {name} defined twice"))
            else:
                macros[name] = Macro(name, params, body, span=span)
        elif kind == "context":
            _, entries, span = built
            if context_entries is not None:
                diagnostics.append(error(span, "E-DUPLICATE", "context declared twice"))
            else:
                context_entries, context_span = entries, span
        elif kind == "main":
            _, body, span = built
            if main is not None:
                diagnostics.append(error(span, "E-DUPLICATE", "main defined twice"))
            else:
                main, main_span = body, span

    resolver = _Resolver(raw_aliases, {}, bases)
    for name, (_, span) in raw_aliases.items():
        try:
            resolver.alias(name, span)
        except _DefinitionError as exc:
            diagnostics.append(exc.located(span or whole))

    failed: Set[str] = set()
    for name, macro in list(macros.items()):
        try:
            macros[name] = Macro(name, macro.params, resolver.process(macro.body), span=macro.span)
        except _DefinitionError as exc:
            diagnostics.append(exc.located(macro.span or whole))
            failed.add(name)

    context = Context()
    if context_entries is not None:
        try:
            context = resolver.context(context_entries, context_span)
        except _DefinitionError as exc:
            diagnostics.append(exc.located(context_span or whole))

    main_failed = False
    if main is None:
        end = max(offsets.size, 1)
        diagnostics.append(error(offsets.span(end - 1, end), "E-SYNTAX", "missing main process (main = ...)"))
        main_failed = True
    else:
        try:
            main = resolver.process(main)
        except _DefinitionError as exc:
            diagnostics.append(exc.located(main_span or whole))
            main_failed = True

    for name, macro in macros.items():
        if name in failed:
            continue
        problem = call_errors(macros, macro.body, macro.span or whole, owner=name)
        if problem is not None:
            diagnostics.append(problem)
            failed.add(name)
    if not main_failed:
        problem = call_errors(macros, main, main_span or whole, owner="main")
        if problem is not None:
            diagnostics.append(problem)
    for name in macro_cycles(macros):
        if name not in failed:
            diagnostics.append(error(macros[name].span or whole, "E-CYCLE", f"process {name} calls itself"))

    if diagnostics:
        diagnostics = sorted(set(diagnostics), key=lambda d: (d.span, d.code, d.message))
        summary = "; ".join(f"{d.code}: {d.message}" for d in diagnostics[:3])
        logger.debug(f"Parse failed with {len(diagnostics)} diagnostic(s)")
        raise ParseError(summary, diagnostics)

    base_types = tuple(dict.fromkeys(declared + list(BUILTIN_BASES)))
    return Program(
        base_types=base_types,
        constants=constants,
        type_aliases=dict(resolver.resolved),
        macros=macros,
        context=context,
        main=main,
        explicit_bases=bases is not None,
    )


def parse_context(source: str, program: Optional[Program] = None) -> Context:
    """
    Parse a typing context (``x : T, A(x), ...``) against a program's declarations.

    Args:
        source: Context text, optionally starting with ``context``
        program: Supplies aliases, constants and base types

    Returns:
        The context, entries in order

    Raises:
        ParseError: On syntax errors or unknown names
    """
    offsets = SourceOffsets(source)
    tree = _parse_tree(source, "context_file", offsets)
    constants = dict(program.constants) if program else {}
    bases = set(program.base_types) if program is not None and program.explicit_bases else None
    aliases = dict(program.type_aliases) if program else {}
    builder = _Builder(offsets, constants, bases)
    resolver = _Resolver({}, aliases, bases)
    try:
        entries = _build(builder, tree)
        return resolver.context(entries, offsets.span(0, offsets.size))
    except _DefinitionError as exc:
        diagnostic = exc.located(offsets.span(0, offsets.size))
        raise ParseError(f"{diagnostic.code}: {diagnostic.message}", [diagnostic]) from None
