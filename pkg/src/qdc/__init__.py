"""Exact engine for bicovariant differential calculi on FRT quantum groups."""

__version__ = "0.1.0"
