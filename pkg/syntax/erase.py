"""
Erasure of refinements.

For a typable process the assumptions and assertions carry no runtime
information, so they can be dropped together with every refinement in the
type annotations, leaving a plain session-typed process.
"""

from .terms import (
    Assert,
    Assume,
    Input,
    Output,
    Par,
    Rec,
    Refined,
    Repl,
    Restrict,
    Session,
    Type,
    Process,
)


def erase_type(t: Type) -> Type:
    """``{x:T | F}`` -> ``T``, everywhere."""
    if isinstance(t, Refined):
        return erase_type(t.base)
    if isinstance(t, Session):
        return Session(t.q, t.dir, t.binder, erase_type(t.payload), erase_type(t.cont))
    if isinstance(t, Rec):
        return Rec(t.name, erase_type(t.body))
    return t


def erase(p: Process) -> Process:
    """Remove every assume and assert and every refinement annotation."""
    if isinstance(p, Assume):
        return erase(p.body)
    if isinstance(p, Assert):
        return erase(p.cont)
    if isinstance(p, Output):
        return Output(p.chan, p.value, erase(p.cont), span=p.span)
    if isinstance(p, Input):
        return Input(p.chan, p.binder, erase(p.cont), span=p.span)
    if isinstance(p, Par):
        return Par(erase(p.left), erase(p.right), span=p.span)
    if isinstance(p, Repl):
        return Repl(erase(p.body), span=p.span)
    if isinstance(p, Restrict):
        peer = erase_type(p.peer) if p.peer is not None else None
        return Restrict(p.x, p.y, erase_type(p.annot), erase(p.body), peer, span=p.span)
    return p
