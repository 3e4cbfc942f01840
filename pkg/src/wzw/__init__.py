"""Exact-arithmetic fusion rings, conformal-block dimensions, and KZ connections."""

__version__ = "0.1.0"
