"""
Fresh names.

Binders introduced by alpha-renaming are ``base'N`` with N drawn from a
process-wide counter, so they never collide with each other. The part
before the first quote is the readable base name used when printing.
"""

import itertools

_counter = itertools.count(1)


def base_name(name: str) -> str:
    """``b1'17`` -> ``b1``."""
    return name.split("'", 1)[0] or "v"


def fresh(hint: str = "v") -> str:
    """Return a globally fresh name derived from hint."""
    return f"{base_name(hint)}'{next(_counter)}"
