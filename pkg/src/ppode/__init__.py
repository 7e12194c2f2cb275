"""Painlevé-property analysis of first-order algebraic ODEs ``f(y', y, z) = 0``."""

__version__ = "0.1.0"
