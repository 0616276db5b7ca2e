"""Exact verification toolkit for the p-adic Borel regulator constructions."""

__version__ = "0.1.0"
