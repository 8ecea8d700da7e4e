"""Projective heights of vectors, polynomials, matrices, and subspaces."""

import random
from fractions import Fraction as F

import pytest

import oracles
from dioph.errors import ZeroVector
from dioph.exactnum import INF, Place, RatPoly
from dioph.heights import (
    SubspaceRep,
    height_matrix,
    height_poly_product_bounds,
    height_polynomial,
    height_subspace,
    height_vector,
    mahler_measure_bound,
    max_norm_at,
    maximal_minors,
)


def poly(*cs):
    return RatPoly([F(c) for c in cs])


@pytest.mark.parametrize(
    "vec, expected",
    [
        ((F(4), F(6)), F(3)),
        ((F(1), F(0), F(0)), F(1)),
        ((F(1, 2), F(1, 3)), F(3)),
    ],
)
def test_vector_height_examples(vec, expected):
    assert height_vector(vec).value == expected


def test_vector_height_matches_oracle():
    rng = random.Random(11)
    for _ in range(150):
        k = rng.randint(1, 5)
        vec = [F(rng.randint(-60, 60), rng.randint(1, 60)) for _ in range(k)]
        if all(v == 0 for v in vec):
            vec[0] = F(1)
        assert height_vector(vec).value == oracles.height_vector(vec)


def test_vector_height_is_projective():
    rng = random.Random(12)
    for _ in range(50):
        vec = [F(rng.randint(-20, 20), rng.randint(1, 9)) for _ in range(3)]
        if all(v == 0 for v in vec):
            vec[0] = F(1)
        c = F(rng.randint(1, 30), rng.randint(1, 30))
        scaled = [c * v for v in vec]
        assert height_vector(scaled).value == height_vector(vec).value


def test_vector_height_at_least_one():
    rng = random.Random(13)
    for _ in range(50):
        vec = [F(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(4)]
        if all(v == 0 for v in vec):
            vec[0] = F(1)
        assert height_vector(vec).value >= 1


def test_zero_vector_rejected():
    with pytest.raises(ZeroVector):
        height_vector((F(0), F(0)))


def test_per_place_norms_reported():
    report = height_vector((F(4), F(6)))
    assert report.norm_at(INF) == 6
    assert report.norm_at(Place(2)) == F(1, 2)
    assert report.norm_at(Place(3)) == 1  # trivial places default to 1
    assert max_norm_at((F(4), F(6)), Place(2)) == F(1, 2)
    prod = F(1)
    for _, norm in report.per_place_norms:
        prod *= norm
    assert prod == report.value


# ---------------------------------------------------------------------------
# matrices: heights through maximal minors
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "rows, expected",
    [
        (((1, 0, 1), (0, 1, 0)), F(1)),
        (((1, 2, 0), (0, 1, 2)), F(4)),
        (((2, 0), (0, 2)), F(1)),
    ],
)
def test_matrix_height_examples(rows, expected):
    m = tuple(tuple(F(x) for x in r) for r in rows)
    assert height_matrix(m).value == expected


def test_maximal_minors_example():
    m = ((F(1), F(2), F(0)), (F(0), F(1), F(2)))
    assert maximal_minors(m) == (F(1), F(2), F(4))


def test_matrix_height_matches_oracle():
    rng = random.Random(21)
    for _ in range(60):
        k = rng.randint(1, 3)
        m = rng.randint(k, 5)
        rows = [[F(rng.randint(-9, 9)) for _ in range(m)] for _ in range(k)]
        if oracles.rank(rows) < k:
            continue
        rows = tuple(tuple(r) for r in rows)
        assert maximal_minors(rows) == tuple(oracles.maximal_minors(rows))
        assert height_matrix(rows).value == oracles.height_matrix(rows)


# ---------------------------------------------------------------------------
# subspaces: the basis and kernel routes agree
# ---------------------------------------------------------------------------


def test_subspace_basis_equals_kernel_route():
    b = ((F(1), F(0), F(1)), (F(0), F(1), F(0)))
    via_basis = height_subspace(SubspaceRep(3, basis_matrix=b))
    via_kernel = height_subspace(SubspaceRep(3, kernel_matrix=b))
    assert via_basis.value == via_kernel.value == 1


def test_subspace_duality_random():
    rng = random.Random(22)
    for _ in range(40):
        d = rng.randint(1, 3)
        rows = [[F(rng.randint(-20, 20)) for _ in range(4)] for _ in range(d)]
        if oracles.rank(rows) < d:
            continue
        rows = tuple(tuple(r) for r in rows)
        hb = height_subspace(SubspaceRep(4, basis_matrix=rows)).value
        hk = height_subspace(SubspaceRep(4, kernel_matrix=rows)).value
        assert hb == hk
        assert hb == oracles.height_matrix(rows)


def test_subspace_height_invariant_under_row_operations():
    b = ((F(1), F(2), F(3)), (F(0), F(1), F(1)))
    b2 = ((F(1), F(3), F(4)), (F(0), F(1), F(1)))  # r0 += r1
    assert (
        height_subspace(SubspaceRep(3, basis_matrix=b)).value
        == height_subspace(SubspaceRep(3, basis_matrix=b2)).value
    )


# ---------------------------------------------------------------------------
# polynomials: product bounds and Mahler measure
# ---------------------------------------------------------------------------


def test_poly_height_examples():
    assert height_polynomial(poly(-1, 1)).value == 1
    assert height_polynomial(poly(1, 2)).value == 2
    assert height_polynomial(poly(F(1, 2), F(1, 3))).value == 3


def test_product_bounds_hold_on_examples():
    for factors in [
        [poly(-1, 1), poly(1, 1)],
        [poly(1, 2), poly(1, 2)],
        [poly(0, 1), poly(0, 1), poly(0, 1)],
    ]:
        lower, upper, holds = height_poly_product_bounds(factors)
        assert holds
        prod = factors[0]
        for f in factors[1:]:
            prod = prod * f
        assert lower <= height_polynomial(prod).value <= upper


def test_product_bounds_random():
    rng = random.Random(23)
    for _ in range(40):
        k = rng.randint(2, 3)
        factors = []
        for _ in range(k):
            deg = rng.randint(1, 3)
            cs = [rng.randint(-8, 8) for _ in range(deg)] + [rng.randint(1, 8)]
            factors.append(poly(*cs))
        _, _, holds = height_poly_product_bounds(factors)
        assert holds


def test_mahler_measure_examples():
    # M(T^2 - 2) = 2, and M^2 <= (n+1) ||P||^2 = 12
    b = mahler_measure_bound(poly(-2, 0, 1))
    assert b.measure_sq.contains(F(4))
    assert b.bound_sq == 12 and b.holds
    b = mahler_measure_bound(poly(1, 0, 1))
    assert b.measure_sq.contains(F(1)) and b.holds


def test_mahler_measure_of_scaled_linear():
    # M(2T - 1) = 2: the leading coefficient, since the root is inside
    # the unit disk
    b = mahler_measure_bound(poly(-1, 2))
    assert b.measure_sq.lo > F(39, 10)
    assert b.measure_sq.hi < F(41, 10)


def test_mahler_measure_vs_roots_oracle():
    # the measure is taken on the primitive integer representative
    import math

    import mpmath

    rng = random.Random(24)
    for _ in range(25):
        cs = [rng.randint(-9, 9) for _ in range(rng.randint(1, 4))] + [
            rng.randint(1, 9)
        ]
        g = math.gcd(*[abs(c) for c in cs])
        prim = [c // g for c in cs]
        b = mahler_measure_bound(poly(*cs))
        assert b.holds
        with mpmath.workdps(40):
            roots = mpmath.polyroots(list(reversed(prim)), maxsteps=200, extraprec=100)
            m = mpmath.mpf(abs(prim[-1]))
            for r in roots:
                m *= max(1, abs(r))
            msq = float(m) ** 2
        assert float(b.measure_sq.lo) - 1e-5 <= msq <= float(b.measure_sq.hi) + 1e-5
