"""Exact computations of beta-element f-invariants and Kervaire criteria."""

__version__ = "0.1.0"
