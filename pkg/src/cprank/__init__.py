"""Exact tools for copositive matrices, cp-decompositions and cp-rank bounds in order 6."""

__version__ = "0.1.0"
