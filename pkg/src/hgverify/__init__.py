"""Exact and numerical verification tools for hypergeometric gamma data."""

from .hypergeom import GAMMA_STAR, GammaList

__all__ = ["GAMMA_STAR", "GammaList"]
__version__ = "0.1.0"
