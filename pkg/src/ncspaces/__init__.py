"""Noncommutative Euclidean spaces from R-matrices: conditions, algebras and canonical forms."""

__version__ = "0.1.0"
