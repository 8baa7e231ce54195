"""Exact algebra for (1,3)-polarised abelian surfaces with canonical level structure."""

from .exactring import FieldSpec, MultiPoly, PolyMatrix, PolyRing, exact_divide, parse_poly, substitute, weighted_degree

__version__ = "0.1.0"

__all__ = ["FieldSpec", "MultiPoly", "PolyMatrix", "PolyRing", "exact_divide", "parse_poly", "substitute", "weighted_degree"]
