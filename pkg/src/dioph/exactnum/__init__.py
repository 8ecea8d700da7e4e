"""Exact scalar, polynomial and certified-real foundations."""

from .dyadic import (
    ComplexDisk,
    DyadicBall,
    Iv,
    exp_iv,
    int_nth_root,
    log2_iv,
    nth_root_iv,
    precision_cap,
    sqrt_iv,
)
from .places import (
    INF,
    Place,
    abs_at_place,
    factor_positive_int,
    iter_norms,
    ord_p,
    product_formula_check,
    support,
)
from .polynomials import (
    RatPoly,
    binomial_shift_matrix,
    discriminant,
    eisenstein_prime_witness,
    factor_over_rationals,
    resultant,
    sylvester_matrix,
)
from .realnumbers import (
    AlgebraicReal,
    LiouvilleBinary,
    RationalReal,
    RealNumber,
    algebraic_real_from_poly,
    as_real,
    compare_reals,
    isolate_real_roots,
    sqrt_real,
)
from .complexroots import (
    certified_root_disks,
    count_roots_in_disk,
    kth_nearest_distance,
    root_distances,
)

__all__ = [
    "AlgebraicReal",
    "ComplexDisk",
    "DyadicBall",
    "INF",
    "Iv",
    "LiouvilleBinary",
    "Place",
    "RatPoly",
    "RationalReal",
    "RealNumber",
    "abs_at_place",
    "algebraic_real_from_poly",
    "as_real",
    "binomial_shift_matrix",
    "certified_root_disks",
    "compare_reals",
    "count_roots_in_disk",
    "discriminant",
    "eisenstein_prime_witness",
    "exp_iv",
    "factor_over_rationals",
    "factor_positive_int",
    "int_nth_root",
    "isolate_real_roots",
    "iter_norms",
    "kth_nearest_distance",
    "log2_iv",
    "nth_root_iv",
    "ord_p",
    "precision_cap",
    "product_formula_check",
    "resultant",
    "root_distances",
    "sqrt_iv",
    "sqrt_real",
    "support",
    "sylvester_matrix",
]
