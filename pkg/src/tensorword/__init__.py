"""Inclusion-exclusion inequalities for tensor powers of PSD matrices."""

__version__ = "0.1.0"
