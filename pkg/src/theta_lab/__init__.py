"""Exact-arithmetic toolkit certifying the projective geometry of the
theta map for rank-2 bundles on hyperelliptic curves, over a prime field."""

__version__ = "0.1.0"

from .fieldctx import PrimeContext

__all__ = ["PrimeContext", "__version__"]
