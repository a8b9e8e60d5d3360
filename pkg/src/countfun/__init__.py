"""Exact computation with sums of subword-counting functions on free monoids and free groups."""

__version__ = "0.1.0"
