"""Exact computations with finite path categories, their ideals, functor modules and recollements."""

__version__ = "0.1.0"
