"""Numerics for extremal fractional truncated Laplacians on the half-space."""

__version__ = "0.1.0"
