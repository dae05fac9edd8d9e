"""Exact computations for parabolic geometries of type (so(n+1,n), P_n)."""

from .linalg import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
