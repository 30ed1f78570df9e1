"""
Alpha Conversion - Renaming bound names
=======================================

This module provides the three renamings the toolkit needs:
- alpha_equivalent: equality up to the names of binders
- normalize_names: readable, deterministic names for printing
- freshen: every binder replaced by a globally fresh name (Barendregt)

All three share one traversal, _Renamer, which rebuilds a term choosing
a new name at each binding site.
"""

import itertools
from typing import Dict

from .binding import free_type_vars, free_vars
from .names import base_name, fresh
from .terms import (
    Assert,
    Assume,
    Atom,
    Inact,
    Input,
    Output,
    Par,
    PROCESS_TYPES,
    Rec,
    Refined,
    Repl,
    Restrict,
    Session,
    Sum,
    Tensor,
    TVar,
    TYPE_TYPES,
    Var,
    make_sum,
)

Env = Dict[str, str]


class _Renamer:
    """Rebuilds a term, asking pick()/tpick() for the name of every binder."""

    def pick(self, old: str, env: Env) -> str:
        raise NotImplementedError

    def tpick(self, old: str, tenv: Env) -> str:
        return old

    def free(self, name: str) -> str:
        return name

    def ref(self, name: str, env: Env) -> str:
        return env[name] if name in env else self.free(name)

    # -- values and formulae ------------------------------------------------

    def value(self, v, env: Env):
        if isinstance(v, Var):
            return Var(self.ref(v.name, env))
        if isinstance(v, Sum):
            return make_sum(self.value(v.left, env), self.value(v.right, env))
        return v

    def formula(self, f, env: Env):
        if isinstance(f, Atom):
            return Atom(f.predicate, tuple(self.value(a, env) for a in f.args))
        if isinstance(f, Tensor):
            return Tensor(self.formula(f.left, env), self.formula(f.right, env))
        return f

    # -- types --------------------------------------------------------------

    def type(self, t, env: Env, tenv: Env):
        if isinstance(t, Session):
            payload = self.type(t.payload, env, tenv)
            binder = self.pick(t.binder, env)
            cont = self.type(t.cont, {**env, t.binder: binder}, tenv)
            return Session(t.q, t.dir, binder, payload, cont)
        if isinstance(t, Refined):
            base = self.type(t.base, env, tenv)
            binder = self.pick(t.binder, env)
            return Refined(binder, base, self.formula(t.formula, {**env, t.binder: binder}))
        if isinstance(t, TVar):
            return TVar(tenv.get(t.name, t.name))
        if isinstance(t, Rec):
            name = self.tpick(t.name, tenv)
            return Rec(name, self.type(t.body, env, {**tenv, t.name: name}))
        return t

    # -- processes ----------------------------------------------------------

    def process(self, p, env: Env, tenv: Env):
        if isinstance(p, Output):
            return Output(self.ref(p.chan, env), self.value(p.value, env), self.process(p.cont, env, tenv), span=p.span)
        if isinstance(p, Input):
            binder = self.pick(p.binder, env)
            cont = self.process(p.cont, {**env, p.binder: binder}, tenv)
            return Input(self.ref(p.chan, env), binder, cont, span=p.span)
        if isinstance(p, Par):
            return Par(self.process(p.left, env, tenv), self.process(p.right, env, tenv), span=p.span)
        if isinstance(p, Repl):
            return Repl(self.process(p.body, env, tenv), span=p.span)
        if isinstance(p, Restrict):
            annot = self.type(p.annot, env, tenv)
            peer = self.type(p.peer, env, tenv) if p.peer is not None else None
            x = self.pick(p.x, env)
            inner = {**env, p.x: x}
            y = self.pick(p.y, inner)
            inner[p.y] = y
            return Restrict(x, y, annot, self.process(p.body, inner, tenv), peer, span=p.span)
        if isinstance(p, Assume):
            return Assume(self.formula(p.formula, env), self.process(p.body, env, tenv), span=p.span)
        if isinstance(p, Assert):
            return Assert(self.formula(p.formula, env), self.process(p.cont, env, tenv), span=p.span)
        if isinstance(p, Inact):
            return p
        raise TypeError(f"not a process: {p!r}")

    def term(self, t):
        if isinstance(t, PROCESS_TYPES):
            return self.process(t, {}, {})
        if isinstance(t, TYPE_TYPES):
            return self.type(t, {}, {})
        if isinstance(t, (Atom, Tensor)):
            return self.formula(t, {})
        return self.value(t, {})


class _Canonical(_Renamer):
    """Binders become #0, #1, ... in traversal order; optionally free names too."""

    def __init__(self, rename_free: bool = False):
        self.counter = itertools.count()
        self.rename_free = rename_free
        self.free_names: Env = {}

    def pick(self, old: str, env: Env) -> str:
        return f"#{next(self.counter)}"

    def tpick(self, old: str, tenv: Env) -> str:
        return f"#{next(self.counter)}"

    def free(self, name: str) -> str:
        if not self.rename_free:
            return name
        return self.free_names.setdefault(name, f"${len(self.free_names)}")


class _Normalizer(_Renamer):
    """Readable names: base name of the binder, digit suffix only to avoid capture."""

    def __init__(self, free: frozenset, free_types: frozenset):
        self.free_names = free
        self.free_types = free_types

    @staticmethod
    def _choose(old: str, taken) -> str:
        base = base_name(old)
        candidate = base
        for k in itertools.count(1):
            if candidate not in taken:
                return candidate
            candidate = f"{base}{k}"
        return candidate

    def pick(self, old: str, env: Env) -> str:
        return self._choose(old, set(env.values()) | self.free_names)

    def tpick(self, old: str, tenv: Env) -> str:
        return self._choose(old, set(tenv.values()) | self.free_types)


class _Freshener(_Renamer):
    def pick(self, old: str, env: Env) -> str:
        return fresh(old)


def alpha_equivalent(left, right) -> bool:
    """
    True iff the two terms are equal up to renaming of bound names.

    Args:
        left: Process, type, formula or value
        right: Term of the same kind

    Returns:
        Whether the terms are alpha-equivalent
    """
    return _Canonical().term(left) == _Canonical().term(right)


def alpha_key(term, *others, rename_free: bool = False):
    """
    Canonical representative of one or more terms.

    With rename_free, free names are also replaced by $0, $1, ... consistently
    across all the terms, so pairs that differ only by a bijective renaming of
    free names share a key.
    """
    renamer = _Canonical(rename_free=rename_free)
    if not others:
        return renamer.term(term)
    return tuple(renamer.term(t) for t in (term,) + others)


def normalize_names(term):
    """
    Rename every binder back to a readable base name.

    ``b1'7`` becomes ``b1``; when that would capture a free name or shadow a
    binder in scope, a digit is appended (``b11``, ``b12``, ...). The result
    is alpha-equivalent to the input and deterministic.
    """
    types = free_type_vars(term) if isinstance(term, TYPE_TYPES) else frozenset()
    return _Normalizer(free_vars(term), types).term(term)


def freshen(term):
    """Replace every binder of term by a globally fresh name."""
    return _Freshener().term(term)
