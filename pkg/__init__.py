"""
linsess - Linearly refined session processes
============================================

Parser, type checker, reduction engine and safety analyzer for the pi
calculus with assume/assert, typed with session types whose payloads may
carry linear-logic refinements.

License: MIT
Version: 1.0.0
"""

__version__ = "1.0.0"
__license__ = "MIT"
