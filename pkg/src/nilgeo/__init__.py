"""Exact verification of degenerations of small nilpotent algebras with a ternary operation."""

__version__ = "0.1.0"
