"""Exact splitting-lemma, cA_n classification and rank-2 toric link toolkit."""

from .poly import INF, ParseError, Poly, PolyError, VarTable, parse, render

__version__ = "0.1.0"

__all__ = ["INF", "ParseError", "Poly", "PolyError", "VarTable", "parse", "render", "__version__"]
