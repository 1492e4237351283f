"""Floer-theoretic obstructions for homology cobordism: exact algebra over Q[U]."""

__version__ = "0.1.0"
