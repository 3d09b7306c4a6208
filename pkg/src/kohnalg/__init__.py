"""Exact-arithmetic toolkit for Kohn's multiplier-ideal procedure on special domains."""

__version__ = "0.1.0"
