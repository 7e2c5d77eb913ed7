"""Exact arithmetic and closed function algebras."""

from .erfexpo import ErfExpoSum, antiderive_on_interval, differentiate
from .piecewise import PiecewisePuiseux, piecewise_moment
from .poly import UniPoly, det_bareiss
from .symbolic import SymbolicValue, gamma_exact, symbolic_equal

__all__ = [
    "ErfExpoSum",
    "PiecewisePuiseux",
    "SymbolicValue",
    "UniPoly",
    "antiderive_on_interval",
    "det_bareiss",
    "differentiate",
    "gamma_exact",
    "piecewise_moment",
    "symbolic_equal",
]
