"""
Formula normalization: flattening to atom multisets and equivalence
modulo commutativity, associativity and unit of the tensor.
"""

from .terms import Atom, AtomBag, Formula, One, Tensor


def _atoms(formula: Formula):
    if isinstance(formula, Atom):
        yield formula
    elif isinstance(formula, Tensor):
        yield from _atoms(formula.left)
        yield from _atoms(formula.right)
    elif not isinstance(formula, One):
        raise TypeError(f"not a formula: {formula!r}")


def flatten_formula(formula: Formula) -> AtomBag:
    """
    Flatten a formula to the multiset of its atoms.

    ``1`` contributes nothing and a tensor contributes the union of its
    operands, so ``A * (B * 1)`` becomes ``{A, B}`` and ``A * A`` keeps both.

    Args:
        formula: Formula to flatten

    Returns:
        AtomBag of the atoms, multiplicities preserved
    """
    return AtomBag.of(_atoms(formula))


def formula_equivalent(left: Formula, right: Formula) -> bool:
    """True iff both formulae flatten to the same multiset of atoms."""
    return flatten_formula(left) == flatten_formula(right)
