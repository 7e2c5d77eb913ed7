"""Exact random-matrix statistics with brute-force and Monte Carlo oracles."""

__version__ = "0.1.0"
