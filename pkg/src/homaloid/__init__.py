"""Exact computations with cubic forms: multiplicative Legendre transforms,
EKP-homaloidality, the Jordan algebra of a cubic norm, and singular-locus
checks for the Hermitian 3x3 norms over R, C, H and O."""

from .cayley_dickson import CatalogEntry, builtin_catalog, catalog_entry, herm3_norm
from .legendre import LegendreVerdict, analyze, fit_polynomial_legendre, fit_rational_legendre
from .poly import CubicForm, Poly, format_poly, parse_poly

__version__ = "0.1.0"

__all__ = [
    "CatalogEntry",
    "CubicForm",
    "LegendreVerdict",
    "Poly",
    "analyze",
    "builtin_catalog",
    "catalog_entry",
    "fit_polynomial_legendre",
    "fit_rational_legendre",
    "format_poly",
    "herm3_norm",
    "parse_poly",
]
