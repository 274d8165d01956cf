"""Exact invariants of jet schemes of group representations."""

__version__ = "0.1.0"
