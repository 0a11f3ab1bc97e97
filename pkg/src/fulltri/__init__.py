"""Computational model of fully triangulated categories over GF(p)."""

__version__ = "0.1.0"
