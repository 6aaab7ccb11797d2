"""Certified positivity proofs by the maximal slope principle."""

__version__ = "0.1.0"
