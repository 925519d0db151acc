"""Discrete dynamics of mutation-periodic quivers and their reductions."""

__version__ = "0.1.0"
