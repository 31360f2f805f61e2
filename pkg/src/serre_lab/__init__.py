"""Frobenius matrices of elliptic curves over prime fields and Serre curves."""
__version__ = "0.1.0"
