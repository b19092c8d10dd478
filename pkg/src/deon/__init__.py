"""Deontic reasoning over finite propositional universes with Hamming semantics."""

__version__ = "0.1.0"
