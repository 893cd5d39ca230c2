"""Lie algebras, enveloping algebras and projective representations of the quantum Hamilton group."""

__version__ = "0.1.0"
