"""Spectral self-map toolkit: coefficient map, local decomposition, induced dynamics."""

__version__ = "0.1.0"
