"""Exact degree sequences and generating-series classification for monomial
self-maps of toric varieties."""

from .exact_linalg import (
    IntegerMatrix,
    IntPolynomial,
    char_poly,
    compound_matrix,
    eigen_spectrum,
    power_sums,
    ratio_is_root_of_unity_2x2,
    ratio_is_root_of_unity_general,
    absolute_irreducibility_2x2,
)

__all__ = [
    "IntegerMatrix",
    "IntPolynomial",
    "char_poly",
    "compound_matrix",
    "eigen_spectrum",
    "power_sums",
    "ratio_is_root_of_unity_2x2",
    "ratio_is_root_of_unity_general",
    "absolute_irreducibility_2x2",
]
