"""Spectral computations for the renormalized fractional Schrodinger flow on the circle."""
__version__ = "0.1.0"
