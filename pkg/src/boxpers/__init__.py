"""Exact box persistence for circle-valued maps on simplicial complexes."""

__version__ = "0.1.0"
