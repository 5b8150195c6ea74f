"""Counterpropagating CV entanglement in lossy coupled-resonator optical waveguides."""

__version__ = "0.1.0"
