"""
Test Reference Checker
======================

The exhaustive derivation search and the algorithmic checker must agree
on every judgement; the corpus and random small processes are compared.
"""

import pytest
from pathlib import Path
import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from hypothesis import HealthCheck, given, reject, settings

from checker import reference_check, typecheck_process
from core.exceptions import FuelExhausted
from parsing import load_program, parse_program
from syntax import Atom, Binding, Context, Direction, Inact, Par, Repl, Resource, Var
from tests.strategies import NAT, judgements, lin, typable_systems

CORPUS = Path(__file__).parent.parent / "corpus"


def agree(context: Context, p) -> bool:
    """Both verdicts, asserting they coincide."""
    try:
        expected = reference_check(context, p)
    except FuelExhausted:
        reject()
    actual = typecheck_process(p, context).accepted
    assert actual == expected, f"algorithmic {actual}, reference {expected}"
    return actual


class TestReferenceChecker:
    """Direct tests of the derivation search."""

    def test_accepts_inact(self):
        assert reference_check(Context(), Inact())

    def test_leaf_requires_unrestricted(self):
        assert not reference_check(Context((Resource(Atom("A")),)), Inact())
        assert reference_check(Context((Binding("n", NAT),)), Inact())

    def test_split_finds_the_right_side(self):
        p = parse_program("main = 0 | assert A. 0").main
        assert reference_check(Context((Resource(Atom("A")),)), p)

    def test_repl_needs_unrestricted_context(self):
        assert not reference_check(Context((Resource(Atom("A")),)), Repl(Inact()))
        assert reference_check(Context((Resource(Atom("A")),)), Par(Repl(Inact()), parse_program("main = assert A. 0").main))

    def test_ill_formed_context(self):
        context = Context((Resource(Atom("ok", (Var("q"),))),))
        assert not reference_check(context, Inact())

    def test_fuel(self):
        _, main = load_program((CORPUS / "system_ok.lsp").read_text())
        with pytest.raises(FuelExhausted):
            reference_check(Context(), main, fuel=1)

    def test_linear_binding_unused(self):
        assert not reference_check(Context((Binding("x", lin(Direction.OUT, NAT)),)), Inact())


class TestAgreement:
    """Algorithmic and reference verdicts coincide."""

    @pytest.mark.parametrize("path", sorted(CORPUS.glob("*.lsp")), ids=lambda p: p.stem)
    def test_corpus(self, path):
        program, main = load_program(path.read_text())
        expected = reference_check(program.context, main, fuel=200000)
        assert typecheck_process(main, program.context).accepted == expected

    @settings(max_examples=500, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    @given(judgements())
    def test_random_judgements(self, judgement):
        context, p = judgement
        agree(context, p)

    @settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    @given(typable_systems())
    def test_typable_systems(self, p):
        assert agree(Context(), p)
