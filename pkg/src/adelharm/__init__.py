"""Exact harmonic analysis on finite abelian groups and bounded filtered objects."""

__version__ = "0.1.0"
