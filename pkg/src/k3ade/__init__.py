"""Exact lattice-theoretic classification of elliptic K3 fiber/torsion data."""

__version__ = "0.1.0"
