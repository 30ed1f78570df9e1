"""
Test Checker Module
===================

Unit tests for well-formedness, context splitting and update, formula
proving, value checking and the algorithmic process checker.
"""

import pytest
from pathlib import Path
import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from checker import (
    ThreadedContext,
    check_program_erased,
    check_split,
    check_value,
    context_update,
    enumerate_splits,
    prove_formula,
    typecheck,
    typecheck_process,
    wf_context,
)
from core.exceptions import TypeCheckError
from parsing import parse_context, parse_program
from services.commands import load_expectations
from syntax import (
    Assert,
    Assume,
    Atom,
    Binding,
    Context,
    Direction,
    End,
    Inact,
    Literal,
    Output,
    Refined,
    Resource,
    Tensor,
    UnitT,
    UnitValue,
    Var,
)
from tests.strategies import NAT, lin, nat, ok_refined, un_server

CORPUS = Path(__file__).parent.parent / "corpus"
EXPECTATIONS = load_expectations()

A, B = Atom("A"), Atom("B")


def check(source: str, context: str = None):
    program = parse_program(source)
    if context is not None:
        return typecheck(program, parse_context(context, program))
    return typecheck(program)


def rejected_with(source: str, context: str = None) -> str:
    result = check(source, context)
    assert not result.accepted
    assert len(result.errors) == 1
    return result.errors[0].code


class TestWellFormedness:
    """Tests for wf_context."""

    def test_dependent_context(self):
        wf_context(Context((Binding("x", UnitT("ccard")), Resource(Atom("charge", (Var("x"),))))))

    def test_formula_before_binding(self):
        with pytest.raises(TypeCheckError) as info:
            wf_context(Context((Resource(Atom("charge", (Var("x"),))), Binding("x", NAT))))
        assert info.value.code == "E-WF"

    def test_binding_twice(self):
        with pytest.raises(TypeCheckError) as info:
            wf_context(Context((Binding("x", NAT), Binding("x", NAT))))
        assert info.value.code == "E-WF"


class TestSplit:
    """Tests for check_split and enumerate_splits."""

    def test_unrestricted_goes_both_ways(self):
        entry = Binding("x", End())
        assert check_split([entry], [entry], [entry])
        assert not check_split([entry], [entry], [])

    def test_linear_goes_one_way(self):
        entry = Binding("x", lin(Direction.IN, UnitT("unit")))
        assert check_split([entry], [entry], [])
        assert check_split([entry], [], [entry])
        assert not check_split([entry], [], [])
        assert not check_split([entry], [entry], [entry])

    def test_resource_needs_its_names(self):
        c, a = Binding("c", UnitT("ccard")), Binding("a", NAT)
        charge = Resource(Atom("charge", (Var("c"), Var("a"))))
        assert check_split([c, a, charge], [c, a, charge], [c, a])
        assert check_split([c, a, charge], [c, a], [c, a, charge])

    def test_enumerate_counts(self):
        splits = list(enumerate_splits([Resource(A), Resource(B)]))
        assert len(splits) == 4
        un = Binding("n", NAT)
        assert list(enumerate_splits([un])) == [((un,), (un,))]

    def test_enumerate_respects_route(self):
        x = Binding("x", lin(Direction.OUT, NAT))
        splits = list(enumerate_splits([x, Resource(A)], lambda e: (True, False) if isinstance(e, Binding) else (True, True)))
        assert all(x in left and x not in right for left, right in splits)
        assert len(splits) == 2

    def test_enumerated_splits_are_splits(self):
        entries = [Binding("n", NAT), Resource(A), Binding("x", lin(Direction.OUT, NAT)), Resource(A)]
        for left, right in enumerate_splits(entries):
            assert check_split(entries, left, right)


class TestUpdate:
    """Tests for context_update."""

    def test_appends_when_absent(self):
        ctx = context_update(ThreadedContext(), "x", lin(Direction.OUT, NAT))
        assert len(ctx) == 1

    def test_appends_after_consumption(self):
        ctx = ThreadedContext.of(Context((Binding("x", lin(Direction.OUT, NAT)),))).consume(0)
        ctx = context_update(ctx, "x", End())
        assert ctx.live() == [Binding("x", End())]

    def test_unrestricted_equivalent_is_noop(self):
        server = un_server()
        ctx = ThreadedContext.of(Context((Binding("s", server),)))
        assert context_update(ctx, "s", server) == ctx

    def test_linear_rebinding_fails(self):
        ctx = ThreadedContext.of(Context((Binding("x", lin(Direction.OUT, NAT)),)))
        with pytest.raises(TypeCheckError) as info:
            context_update(ctx, "x", End())
        assert info.value.code == "E-UPDATE"

    def test_refinement_is_normalized(self):
        ctx = context_update(ThreadedContext(), "a", ok_refined())
        assert ctx.live() == [Binding("a", NAT), Resource(Atom("ok", (Var("a"),)))]


class TestFormulasAndValues:
    """Tests for prove_formula and check_value."""

    def test_prove_consumes_atoms(self):
        ctx = ThreadedContext.of(Context((Resource(A), Resource(A), Resource(B))))
        rest = prove_formula(ctx, Tensor(A, B))
        assert rest.live() == [Resource(A)]

    def test_prove_reports_multiplicities(self):
        ctx = ThreadedContext.of(Context((Resource(A),)))
        with pytest.raises(TypeCheckError) as info:
            prove_formula(ctx, Tensor(A, A))
        assert info.value.code == "E-FORMULA"
        assert "need 2, have 1" in info.value.explanation

    def test_refined_value_pays_with_atoms(self):
        ctx = ThreadedContext.of(Context((Resource(Atom("ok", (nat(3),))),)))
        assert check_value(ctx, nat(3), ok_refined()).live() == []
        with pytest.raises(TypeCheckError) as info:
            check_value(ctx, nat(4), ok_refined())
        assert info.value.code == "E-FORMULA"

    def test_linear_variable_is_consumed(self):
        t = lin(Direction.OUT, NAT)
        ctx = ThreadedContext.of(Context((Binding("x", t),)))
        assert check_value(ctx, Var("x"), t).live() == []
        assert check_value(ThreadedContext.of(Context((Binding("n", NAT),))), Var("n"), NAT).live() == [Binding("n", NAT)]

    def test_value_mismatches(self):
        ctx = ThreadedContext()
        for value, t in ((UnitValue(), NAT), (nat(1), UnitT("unit")), (Literal("c", "ccard"), NAT)):
            with pytest.raises(TypeCheckError) as info:
                check_value(ctx, value, t)
            assert info.value.code == "E-MISMATCH"

    def test_unbound_variable(self):
        with pytest.raises(TypeCheckError) as info:
            check_value(ThreadedContext(), Var("q"), NAT)
        assert info.value.code == "E-WF"


class TestProcesses:
    """Tests for the process checker on small examples."""

    def test_inact(self):
        assert check("main = 0").accepted

    def test_session_pair(self):
        assert check("main = new x y : lin!nat. lin?unit. end (x!1. x?u. 0 | y?n. y!(). 0)").accepted

    def test_refined_payload(self):
        source = "main = new x y : lin!{w:nat | ok(w)}. end ((assume ok(3)) x!3. 0 | y?n. assert ok(n). 0)"
        assert check(source).accepted

    def test_assume_spans_parallel(self):
        assert check("main = (assume A) (0 | assert A. 0)").accepted

    def test_replicated_server(self):
        source = "main = new s c : rec t. un?nat. t (*s?z. 0 | c!1. 0 | c!2. 0)"
        assert check(source).accepted

    def test_delegation(self):
        source = (
            "main = new x y : lin!(lin!nat. end). end new a b : lin!nat. end "
            "(x!a. 0 | y?k. k!5. 0 | b?n. 0)"
        )
        assert check(source).accepted

    def test_residual_is_reported(self):
        result = check("context n : nat; main = 0")
        assert result.accepted
        assert list(result.residual) == [Binding("n", NAT)]

    def test_e_dual(self):
        assert rejected_with("main = new x y : nat 0") == "E-DUAL"
        assert rejected_with("main = new x y : lin!nat. end, lin!nat. end (x!1. 0 | 0)") == "E-DUAL"

    def test_e_split(self):
        assert rejected_with("main = (assume A) 0") == "E-SPLIT"
        assert rejected_with("main = new x y : lin!nat. end (x!1. 0 | x!1. 0 | y?z. 0)") == "E-SPLIT"

    def test_e_formula(self):
        assert rejected_with("main = assert A. 0") == "E-FORMULA"
        assert rejected_with("main = (assume A) assert A * A. 0") == "E-FORMULA"

    def test_e_update(self):
        assert rejected_with("main = new x y : un!nat. end (x!1. 0 | 0)") == "E-UPDATE"

    def test_e_wf(self):
        assert rejected_with("main = x!1. 0") == "E-WF"
        assert rejected_with("main = (assume A(q)) assert A(q). 0") == "E-WF"

    def test_e_unqual(self):
        assert rejected_with("main = 0", "x : lin!nat. end") == "E-UNQUAL"
        assert rejected_with("main = new x y : lin!nat. end (*x!1. 0 | y?z. 0)") == "E-UNQUAL"

    def test_e_notsession(self):
        assert rejected_with("main = new x y : end x!1. 0") == "E-NOTSESSION"
        assert rejected_with("main = new x y : lin!nat. end (x?z. 0 | y!1. 0)") == "E-NOTSESSION"

    def test_e_mismatch(self):
        assert rejected_with("main = new x y : lin!nat. end (x!(). 0 | y?z. 0)") == "E-MISMATCH"

    def test_error_span_is_innermost_node(self):
        source = "main = new x y : lin!nat. end (x!(). 0 | y?z. 0)"
        error = check(source).errors[0]
        start, end = error.span
        assert source[start:end] == "x!(). 0"
        assert error.context_slice

    def test_open_context(self):
        assert check("main = assert A. 0", "A").accepted
        assert check("context A; main = assert A. 0").accepted

    def test_context_bound_channel(self):
        assert check("main = x!1. 0", "x : lin!nat. end").accepted
        assert rejected_with("main = x!1. 0", "x : lin!nat. lin!nat. end") == "E-SPLIT"

    def test_erased_checking(self):
        program = parse_program("main = new x y : lin!{w:nat | ok(w)}. end (x!3. 0 | y?n. 0)")
        assert not typecheck(program).accepted
        assert check_program_erased(program).accepted

    def test_typecheck_process_on_terms(self):
        p = Assume(A, Assert(A, Inact()))
        assert typecheck_process(p).accepted
        assert not typecheck_process(Output("x", nat(1), Inact())).accepted


class TestCorpus:
    """The bundled example programs."""

    @pytest.mark.parametrize("name", sorted(EXPECTATIONS), ids=lambda n: n)
    def test_check_verdicts(self, name):
        expected = EXPECTATIONS[name]["check"]
        result = check((CORPUS / name).read_text())
        assert result.accepted == (expected["verdict"] == "accept")
        if "code" in expected:
            assert result.errors[0].code == expected["code"]

    @pytest.mark.parametrize(
        "name",
        sorted(n for n, e in EXPECTATIONS.items() if "check_erased" in e),
        ids=lambda n: n,
    )
    def test_erased_verdicts(self, name):
        program = parse_program((CORPUS / name).read_text())
        expected = EXPECTATIONS[name]["check_erased"]
        assert check_program_erased(program).accepted == (expected["verdict"] == "accept")

    def test_overcharge_error_names_the_restriction(self):
        source = (CORPUS / "system_overcharge.lsp").read_text()
        error = check(source).errors[0]
        assert source[error.span[0]:error.span[1]].startswith("new s1 s2")

    def test_doublecharge_reports_missing_charge(self):
        error = check((CORPUS / "system_doublecharge.lsp").read_text()).errors[0]
        assert "charge" in error.explanation
