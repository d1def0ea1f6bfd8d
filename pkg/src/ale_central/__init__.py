"""Exact lattice and resolution checks with central-sphere metric numerics for ADE instantons."""

__version__ = "0.1.0"
