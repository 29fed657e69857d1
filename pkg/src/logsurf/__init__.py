"""Exact log minimal model program for surfaces described by intersection lattices."""

__version__ = "0.1.0"
