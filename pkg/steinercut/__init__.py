"""Deterministic minimum Steiner cut via terminal-strong decompositions."""

__version__ = "0.1"
