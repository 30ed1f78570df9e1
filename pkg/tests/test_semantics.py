"""
Test Semantics Module
=====================

Unit tests for heating to canonical form, the reduction engine and the
safety analyzer; reduction traces of the corpus; preservation and
safety of typable processes.
"""

import re
import random

import pytest
from pathlib import Path
import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from hypothesis import HealthCheck, given, settings

from checker import typecheck_process
from core.exceptions import LinsessError, SortError
from parsing import load_program
from semantics import (
    AssertCut,
    Com,
    Verdict,
    canonicalize,
    check_safety,
    enumerate_canonical_forms,
    find_redexes,
    is_safe_canonical,
    reduce_step,
    run,
)
from semantics.canonical import canonical_key
from services.commands import load_expectations
from syntax import (
    Assert,
    Assume,
    Atom,
    AtomBag,
    Direction,
    Inact,
    Input,
    Literal,
    Output,
    Par,
    Repl,
    Restrict,
    Session,
    alpha_equivalent,
    flatten_formula,
    substitute,
    unfold_head,
)
from tests.strategies import checker_processes, typable_systems

CORPUS = Path(__file__).parent.parent / "corpus"
EXPECTATIONS = load_expectations()

A, B = Atom("A"), Atom("B")
CHARGE_100 = Atom("charge", (Literal("c", "ccard"), Literal(100, "nat")))
CHARGE_110 = Atom("charge", (Literal("c", "ccard"), Literal(110, "nat")))


def main_of(source: str):
    return load_program(source)[1]


def corpus(name: str):
    return load_program((CORPUS / name).read_text())


def with_main(name: str, main: str):
    """The corpus program's declarations with another main process."""
    source = (CORPUS / name).read_text()
    return main_of(re.sub(r"^main = .*$", f"main = {main}", source, flags=re.MULTILINE))


def same_canonical(p, q) -> bool:
    return canonical_key(canonicalize(p)) == canonical_key(canonicalize(q))


# =============================================================================
# Heating
# =============================================================================

class TestCanonical:
    """Tests for canonicalize and canonical form enumeration."""

    def test_assume_one_disappears(self):
        form = canonicalize(main_of("main = (assume 1) x!1. 0"))
        assert len(form.assumptions) == 0
        assert form.threads == (Output("x", Literal(1, "nat"), Inact()),)

    def test_assumptions_flatten(self):
        form = canonicalize(main_of("main = (assume A * B) 0"))
        assert form.assumptions == AtomBag.of([A, B])
        assert form.threads == (Inact(),)

    def test_assume_hoists_over_parallel(self):
        form = canonicalize(main_of("main = (assume A) 0 | assert A. 0"))
        assert form.assumptions == AtomBag.of([A])
        assert form.threads == (Assert(A, Inact()),)

    def test_restriction_hoisting_avoids_capture(self):
        form = canonicalize(main_of("main = new x y : lin!nat. end x!1. 0 | x!2. 0"))
        (x, _, _), = form.restrictions
        assert x != "x"
        assert form.threads[0].chan == x
        assert form.threads[1].chan == "x"

    def test_unused_restrictions_are_collected(self):
        assert canonicalize(main_of("main = new x y : end 0")).restrictions == ()
        assert canonicalize(main_of("main = new x y : end x?z. 0")).restrictions != ()

    def test_prefixes_block_heating(self):
        form = canonicalize(main_of("main = x?z. (assume A) 0"))
        assert len(form.assumptions) == 0
        assert len(form.threads) == 1

    def test_read_back_is_stable(self):
        _, main = corpus("system_ok.lsp")
        form = canonicalize(main)
        assert canonical_key(canonicalize(form.to_process())) == canonical_key(form)

    def test_replication_is_not_unfolded(self):
        forms = enumerate_canonical_forms(main_of("main = *assert A. 0"), 1)
        assert len(forms) == 2
        assert isinstance(forms[0].threads[0], Repl)
        assert forms[1].threads[0] == Assert(A, Inact())
        assert isinstance(forms[1].threads[1], Repl)

    def test_budget_zero(self):
        assert len(enumerate_canonical_forms(main_of("main = *assert A. 0"), 0)) == 1


# =============================================================================
# Reduction
# =============================================================================

def _region(p, env, restrictions, assumptions, heads):
    """Threads reachable from the top without crossing a prefix."""
    if isinstance(p, Par):
        _region(p.left, env, restrictions, assumptions, heads)
        _region(p.right, env, restrictions, assumptions, heads)
    elif isinstance(p, Restrict):
        rid = len(restrictions)
        restrictions.append(p.annot)
        _region(p.body, {**env, p.x: (rid, 0), p.y: (rid, 1)}, restrictions, assumptions, heads)
    elif isinstance(p, Assume):
        assumptions.extend(flatten_formula(p.formula))
        _region(p.body, env, restrictions, assumptions, heads)
    elif isinstance(p, Assert) and not _chain(p):
        _region(p.cont, env, restrictions, assumptions, heads)
    elif not isinstance(p, Inact):
        heads.append((p, env))


def _chain(p):
    atoms = []
    while isinstance(p, Assert):
        atoms.extend(flatten_formula(p.formula))
        p = p.cont
    return atoms


def has_redex(p) -> bool:
    """Brute-force redex search over the scope structure of a replication-free process."""
    restrictions, assumptions, heads = [], [], []
    _region(p, {}, restrictions, assumptions, heads)
    for i, (out, env_out) in enumerate(heads):
        if not isinstance(out, Output) or out.chan not in env_out:
            continue
        rid, side = env_out[out.chan]
        try:
            head = unfold_head(restrictions[rid])
        except LinsessError:
            continue
        if not isinstance(head, Session) or side != (0 if head.dir is Direction.OUT else 1):
            continue
        for j, (inp, env_in) in enumerate(heads):
            if i == j or not isinstance(inp, Input) or env_in.get(inp.chan) != (rid, 1 - side):
                continue
            try:
                substitute(inp.cont, inp.binder, out.value)
            except SortError:
                continue
            return True
    return any(atom in assumptions for q, _ in heads for atom in _chain(q))


class TestReduction:
    """Tests for redexes, single steps and runs."""

    def test_communication(self):
        p = main_of("main = new x y : lin!nat. end (x!1. 0 | y?z. assert ok(z). 0)")
        step = reduce_step(p)
        assert step is not None
        q, redex = step
        assert isinstance(redex, Com)
        assert redex.label == "x->y 1"
        assert canonicalize(q).threads == (Assert(Atom("ok", (Literal(1, "nat"),)), Inact()),)

    def test_assertion_meets_assumption(self):
        p = main_of("main = (assume A * B) (assert B. 0 | assert A. 0)")
        redexes = find_redexes(canonicalize(p))
        assert [r.atom for r in redexes] == [B, A]
        assert all(isinstance(r, AssertCut) for r in redexes)

    def test_redexes_ordered_by_thread(self):
        p = main_of("main = (assume A) new x y : lin!nat. end (assert A. 0 | x!1. 0 | y?z. 0)")
        redexes = find_redexes(canonicalize(p))
        assert [type(r) for r in redexes] == [AssertCut, Com]
        _, first = reduce_step(p)
        assert isinstance(first, AssertCut)

        q = main_of("main = (assume A) new x y : lin!nat. end (x!1. 0 | assert A. 0 | y?z. 0)")
        assert [type(r) for r in find_redexes(canonicalize(q))] == [Com, AssertCut]

    def test_direction_decides_sender(self):
        p = main_of("main = new x y : lin?nat. end (x!1. 0 | y?z. 0)")
        assert find_redexes(canonicalize(p)) == []

    def test_literal_never_becomes_a_channel(self):
        p = main_of("main = new x y : lin!nat. end (x!1. 0 | y?z. z!2. 0)")
        assert find_redexes(canonicalize(p)) == []

    def test_replicated_receiver_stays(self):
        p = main_of("main = new s c : rec t. un?nat. t (*s?z. 0 | c!1. 0 | c!2. 0)")
        trace = run(p)
        assert len(trace.steps) == 2
        assert trace.verdict is Verdict.TERMINATED_CLEAN

    def test_stuck_io(self):
        trace = run(main_of("main = new x y : lin!nat. end x!1. 0"))
        assert trace.verdict is Verdict.STUCK_IO
        assert trace.steps == []

    def test_step_limit(self):
        p = main_of("main = new s c : rec t. un?nat. t (*s?z. 0 | *c!1. 0)")
        trace = run(p, max_steps=5)
        assert trace.verdict is Verdict.STEP_LIMIT
        assert len(trace.steps) == 5

    def test_negative_step_limit(self):
        with pytest.raises(ValueError):
            run(Inact(), max_steps=-1)

    def test_unknown_policy(self):
        with pytest.raises(ValueError):
            reduce_step(main_of("main = (assume A) assert A. 0"), policy="fair")

    def test_random_policy_is_seeded(self):
        _, main = corpus("system_ok.lsp")
        first = run(main, policy="random", seed=7)
        second = run(main, policy="random", seed=7)
        assert [s.redex.label for s in first.steps] == [s.redex.label for s in second.steps]
        assert first.verdict is Verdict.TERMINATED_CLEAN

    def test_random_rng_argument(self):
        p = main_of("main = (assume A * A) (assert A. 0 | assert A. 0)")
        _, redex = reduce_step(p, policy="random", rng=random.Random(1))
        assert redex.atom == A

    @settings(max_examples=500, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    @given(checker_processes(replicate=False))
    def test_redexes_match_brute_force(self, p):
        assert bool(find_redexes(canonicalize(p))) == has_redex(p)


# =============================================================================
# Safety
# =============================================================================

class TestSafety:
    """Tests for the assertion safety analyzer."""

    def test_membership(self):
        safe, witnesses = is_safe_canonical(canonicalize(main_of("main = (assume A) (assert A. 0 | assert A. 0)")))
        assert safe
        assert witnesses == []

    def test_overcommitted_atoms_are_reported(self):
        report = check_safety(main_of("main = (assume A) (assert A. 0 | assert A. 0)"))
        assert report.safe
        assert report.overcommitted == [A]

    def test_unmatched_assertion(self):
        report = check_safety(main_of("main = (assume charge(`c:ccard`,100)) assert charge(`c:ccard`,110). 0"))
        assert not report.safe
        assert report.witnesses[0].atom == CHARGE_110
        assert report.witnesses[0].thread == 0

    def test_assertion_behind_prefix_is_safe(self):
        assert check_safety(main_of("main = x?z. assert A. 0")).safe

    def test_replication_needs_unfolding(self):
        p = main_of("main = *assert A. 0")
        assert check_safety(p, unfold_budget=0).safe
        report = check_safety(p, unfold_budget=1)
        assert not report.safe
        assert report.explored_forms == 2
        assert report.unfold_budget_used == 1

    def test_workers_agree(self):
        p = main_of("main = *assert A. 0 | *assert B. 0")
        inline = check_safety(p, unfold_budget=2)
        pooled = check_safety(p, unfold_budget=2, workers=4)
        assert pooled.safe == inline.safe
        assert pooled.explored_forms == inline.explored_forms
        assert len(pooled.witnesses) == len(inline.witnesses)

    def test_report_to_dict(self):
        data = check_safety(main_of("main = assert A. 0")).to_dict()
        assert data["safe"] is False
        assert data["witnesses"][0]["atom"] == "A"


# =============================================================================
# The corpus
# =============================================================================

class TestCorpusRuns:
    """Reduction of the bundled example programs."""

    @pytest.mark.parametrize(
        "name", sorted(n for n, e in EXPECTATIONS.items() if "reduce" in e), ids=lambda n: n
    )
    def test_verdicts_and_steps(self, name):
        expected = EXPECTATIONS[name]["reduce"]
        _, main = corpus(name)
        trace = run(main)
        assert trace.verdict.value == expected["verdict"]
        assert len(trace.steps) == expected["steps"]

    @pytest.mark.parametrize(
        "name", sorted(n for n, e in EXPECTATIONS.items() if "safety" in e), ids=lambda n: n
    )
    def test_safety(self, name):
        _, main = corpus(name)
        assert check_safety(main).safe == (EXPECTATIONS[name]["safety"]["verdict"] == "safe")

    def test_store_reaches_bank(self):
        _, main = corpus("system_ok.lsp")
        trace = run(main)
        assert trace.to_lines()[0].startswith("step 1: Com s1->s2")
        expected_mid = with_main(
            "system_ok.lsp", "new r1 r2 : Tbank (assume charge(`c`,100)) (Charge(`c`, 100) | Bank1)"
        )
        assert same_canonical(trace.steps[2].process, expected_mid)
        assert same_canonical(trace.terminal, with_main("system_ok.lsp", "new r1 r2 : Tbank Bank1"))

    def test_dynamic_overcharge_is_caught(self):
        _, main = corpus("system_overcharge_dynamic.lsp")
        trace = run(main)
        assert trace.verdict is Verdict.STUCK_ASSERT
        assert [w.atom for w in trace.safety.witnesses] == [CHARGE_110]
        assert CHARGE_100 in canonicalize(trace.terminal).assumptions

    def test_double_charge_is_caught(self):
        _, main = corpus("system_doublecharge.lsp")
        trace = run(main)
        assert trace.verdict is Verdict.STUCK_ASSERT
        assert [w.atom for w in trace.safety.witnesses] == [CHARGE_100]
        assert len(canonicalize(trace.terminal).assumptions) == 0

    def test_double_charge_with_two_assumptions(self):
        _, main = corpus("system_doublecharge_ok.lsp")
        trace = run(main)
        assert trace.verdict is Verdict.TERMINATED_CLEAN
        assert same_canonical(trace.terminal, with_main("system_doublecharge_ok.lsp", "new r1 r2 : Tbank Bank1"))

    def test_assume_scope_extends_over_assert(self):
        _, main = corpus("stuck_pair.lsp")
        assert check_safety(main).safe
        assert typecheck_process(main).errors[0].code == "E-SPLIT"
        trace = run(main)
        assert trace.verdict is Verdict.TERMINATED_CLEAN
        assert alpha_equivalent(trace.terminal, Inact())

    def test_trace_to_dict(self):
        _, main = corpus("assume_scope.lsp")
        data = run(main).to_dict()
        assert data["verdict"] == "terminated-clean"
        assert data["steps"][0]["rule"] == "Assert"
        assert data["terminal"] == "0"


# =============================================================================
# Typable processes
# =============================================================================

ACCEPTED = sorted(n for n, e in EXPECTATIONS.items() if e["check"]["verdict"] == "accept" and n != "assert_open.lsp")


class TestPreservation:
    """Every reduct of a typable closed process is typable and safe."""

    @pytest.mark.parametrize("name", ACCEPTED, ids=lambda n: n)
    def test_corpus_reducts(self, name):
        program, main = corpus(name)
        trace = run(main)
        for step in trace.steps:
            assert typecheck_process(step.process, program.context).accepted, step.line()
            assert check_safety(step.process).safe, step.line()
        assert trace.verdict is Verdict.TERMINATED_CLEAN

    @settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    @given(typable_systems())
    def test_generated_reducts(self, p):
        assert typecheck_process(p).accepted
        assert check_safety(p).safe
        trace = run(p)
        for step in trace.steps:
            assert typecheck_process(step.process).accepted, step.line()
            assert check_safety(step.process).safe, step.line()
        assert trace.verdict is Verdict.TERMINATED_CLEAN
