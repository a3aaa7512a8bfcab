"""Exact Hochschild, cyclic and mixed-complex computations for finite dg categories."""

__version__ = "0.1.0"
