"""Twisted chain complexes over differential graded algebras."""

__version__ = "0.1.0"
