"""Pivot-minors, chain-groups and width parameters over small finite fields."""

__version__ = "0.1.0"
