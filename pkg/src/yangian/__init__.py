"""Exact Yangian evaluation, intertwiner and permutation-coefficient engine."""

__version__ = "0.1.0"
