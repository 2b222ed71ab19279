"""Rank-two non-abelian zeta functions of Q and quadratic fields."""

__version__ = "0.1.0"
