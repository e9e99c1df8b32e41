"""Equi-n-squares: shuffle algebra, transversal search, bounded transition
compilation and indirection-based sequence generation."""

__version__ = "0.1.0"
