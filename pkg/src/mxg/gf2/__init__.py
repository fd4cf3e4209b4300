"""Polynomial and matrix algebra over GF(2)."""

from .charpoly import (
    EXPENSIVE_DEGREE,
    MATRIX_CAP,
    DegenerateProjectionError,
    ExpensiveOperationError,
    SizeError,
    UnsupportedDegreeError,
    char_poly,
    is_irreducible_prime_degree,
    is_primitive_small,
    transition_matrix,
)
from .matrix import EliminationBasis, Gf2Matrix, rank
from .poly import (
    Gf2Poly,
    PolyDomainError,
    berlekamp_massey,
    poly_mul_mod,
    poly_powmod_x,
    weight,
)

__all__ = [
    "EXPENSIVE_DEGREE",
    "MATRIX_CAP",
    "DegenerateProjectionError",
    "ExpensiveOperationError",
    "SizeError",
    "UnsupportedDegreeError",
    "EliminationBasis",
    "Gf2Matrix",
    "Gf2Poly",
    "PolyDomainError",
    "berlekamp_massey",
    "char_poly",
    "is_irreducible_prime_degree",
    "is_primitive_small",
    "poly_mul_mod",
    "poly_powmod_x",
    "rank",
    "transition_matrix",
    "weight",
]
