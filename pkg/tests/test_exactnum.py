"""Places, polynomial primitives, root isolation, and binary series."""

import math
import random
from fractions import Fraction as F

import pytest

import oracles
from dioph.errors import ZeroInput
from dioph.exactnum import (
    INF,
    Iv,
    LiouvilleBinary,
    Place,
    RatPoly,
    abs_at_place,
    algebraic_real_from_poly,
    compare_reals,
    count_roots_in_disk,
    discriminant,
    eisenstein_prime_witness,
    factor_over_rationals,
    int_nth_root,
    isolate_real_roots,
    iter_norms,
    product_formula_check,
    resultant,
    sqrt_real,
    support,
)

T = RatPoly.monomial(1)


def poly(*cs):
    return RatPoly([F(c) for c in cs])


# ---------------------------------------------------------------------------
# places
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "x, place, expected",
    [
        (F(12), Place(2), F(1, 4)),
        (F(-3, 4), INF, F(3, 4)),
        (F(5, 7), Place(7), F(7)),
    ],
)
def test_absolute_value_at_place(x, place, expected):
    assert abs_at_place(x, place) == expected


def test_absolute_values_match_oracle():
    rng = random.Random(101)
    for _ in range(200):
        x = F(rng.randint(-500, 500) or 1, rng.randint(1, 500))
        for place, norm in iter_norms(x):
            p = math.inf if place == INF else place.p
            assert norm == oracles.abs_at(x, p)


@pytest.mark.parametrize("x", [F(-6), F(1, 35), F(4), F(2026, 813)])
def test_product_formula_examples(x):
    assert product_formula_check(x)


def test_product_formula_from_norms():
    # the product over iter_norms really is 1, term by term
    x = F(-840, 143)
    prod = F(1)
    for _, norm in iter_norms(x):
        prod *= norm
    assert prod == 1


def test_support_excludes_trivial_places():
    sup = support(F(-3, 4))
    assert sup == [INF, Place(2), Place(3)]
    assert Place(5) not in sup


def test_zero_has_no_norms():
    with pytest.raises(ZeroInput):
        list(iter_norms(F(0)))


# ---------------------------------------------------------------------------
# resultant / discriminant
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "p, q, expected",
    [
        ((-1, 1), (1, 1), F(2)),
        ((1, 0, 1), (-2, 1), F(5)),
        ((-1, 0, 1), (-1, 1), F(0)),
    ],
)
def test_resultant_examples(p, q, expected):
    assert resultant(poly(*p), poly(*q)) == expected


@pytest.mark.parametrize(
    "p, expected",
    [
        ((-2, 0, 1), F(8)),
        ((1, 1, 1), F(-3)),
        ((-2, 0, 2), F(16)),
    ],
)
def test_discriminant_examples(p, expected):
    assert discriminant(poly(*p)) == expected


def test_resultant_and_discriminant_match_sympy():
    rng = random.Random(202)
    for _ in range(60):
        deg_p = rng.randint(1, 4)
        deg_q = rng.randint(1, 4)
        p = [rng.randint(-9, 9) for _ in range(deg_p)] + [rng.randint(1, 9)]
        q = [rng.randint(-9, 9) for _ in range(deg_q)] + [rng.randint(1, 9)]
        assert resultant(poly(*p), poly(*q)) == oracles.resultant(p, q)
        assert discriminant(poly(*p)) == oracles.discriminant(p)


def test_resultant_vanishes_iff_common_factor():
    p = poly(-1, 0, 1)  # (T-1)(T+1)
    q = poly(2, -3, 1)  # (T-1)(T-2)
    assert resultant(p, q) == 0


# ---------------------------------------------------------------------------
# real root isolation and disk counting
# ---------------------------------------------------------------------------


def test_isolate_sqrt2():
    roots = isolate_real_roots(poly(-2, 0, 1))
    assert len(roots) == 2
    # increasing order: -sqrt2 then sqrt2
    lo, hi = roots[1].enclosure(64)
    assert F(141, 100) < lo <= hi < F(142, 100)


def test_isolate_no_real_roots():
    assert isolate_real_roots(poly(1, 0, 1)) == []


def test_isolate_orders_roots_increasingly():
    roots = isolate_real_roots(poly(1, -3, 2))  # (2T-1)(T-1)
    assert len(roots) == 2
    assert roots[0].as_fraction() == F(1, 2)
    assert roots[1].as_fraction() == F(1)


@pytest.mark.parametrize(
    "p, center, radius, expected",
    [
        ((-2, 0, 1), F(0), F(2), 2),
        ((1, 0, 1), F(0), F(1, 2), 0),
        # (T - 1/2)^2 - 1/100: both roots within 1/5 of 1/2
        ((F(6, 25), -1, 1), F(1, 2), F(1, 5), 2),
    ],
)
def test_count_roots_in_disk(p, center, radius, expected):
    assert count_roots_in_disk(poly(*p), center, radius) == expected


def test_count_roots_on_boundary_is_refused():
    from dioph.errors import BoundaryUndecidable

    # roots at exactly 1/2 +- 1/5: the query circle passes through them
    p = poly(F(21, 100), -1, 1)
    with pytest.raises(BoundaryUndecidable):
        count_roots_in_disk(p, F(1, 2), F(1, 5))


def test_root_count_matches_mpmath():
    rng = random.Random(303)
    for _ in range(25):
        cs = [rng.randint(-6, 6) for _ in range(rng.randint(1, 4))] + [
            rng.randint(1, 6)
        ]
        center = F(rng.randint(-2, 2), rng.randint(1, 3))
        radius = F(rng.randint(1, 8), 4)
        dists = oracles.mp_root_distances(cs, center)
        r = float(radius)
        # skip configurations where a root hugs the boundary
        if any(abs(d - r) < 1e-9 for d in dists):
            continue
        want = sum(1 for d in dists if d < r)
        assert count_roots_in_disk(poly(*cs), center, radius) == want


# ---------------------------------------------------------------------------
# factoring
# ---------------------------------------------------------------------------


def test_factor_difference_of_squares():
    content, factors = factor_over_rationals(poly(-1, 0, 1))
    assert content == 1
    assert sorted(f.coeffs for f, _ in factors) == [
        (F(-1), F(1)),
        (F(1), F(1)),
    ]
    assert all(mult == 1 for _, mult in factors)


def test_factor_eisenstein_irreducible():
    content, factors = factor_over_rationals(poly(3, 0, 1))
    assert content == 1 and len(factors) == 1
    assert factors[0][0] == poly(3, 0, 1)
    assert eisenstein_prime_witness(poly(3, 0, 1)) == 3


def test_factor_pulls_content_and_linears():
    content, factors = factor_over_rationals(poly(0, -2, 0, 2))
    assert content == 2
    assert len(factors) == 3
    assert all(f.degree == 1 and mult == 1 for f, mult in factors)


def test_eisenstein_witness_absent():
    assert eisenstein_prime_witness(poly(-1, 0, 1)) is None


def test_factorization_matches_sympy_irreducibility():
    rng = random.Random(404)
    for _ in range(40):
        cs = [rng.randint(-10, 10) for _ in range(rng.randint(1, 4))] + [
            rng.randint(1, 10)
        ]
        _, factors = factor_over_rationals(poly(*cs))
        package_irreducible = len(factors) == 1 and factors[0][1] == 1
        assert package_irreducible == oracles.is_irreducible(cs)


# ---------------------------------------------------------------------------
# dyadic intervals and integer roots
# ---------------------------------------------------------------------------


def test_int_nth_root_examples():
    assert int_nth_root(6**5, 2) == 88
    assert int_nth_root(27, 3) == 3
    assert int_nth_root(26, 3) == 2


def test_int_nth_root_matches_sympy():
    rng = random.Random(505)
    for _ in range(200):
        m = rng.randint(0, 10**12)
        t = rng.randint(1, 5)
        assert int_nth_root(m, t) == oracles.nth_root_floor(m, t)


def test_interval_arithmetic_soundness():
    rng = random.Random(606)
    for _ in range(300):
        a = F(rng.randint(-50, 50), rng.randint(1, 10))
        b = F(rng.randint(-50, 50), rng.randint(1, 10))
        wa = F(rng.randint(0, 5), 16)
        wb = F(rng.randint(0, 5), 16)
        ia = Iv(a - wa, a + wa)
        ib = Iv(b - wb, b + wb)
        assert (ia + ib).contains(a + b)
        assert (ia - ib).contains(a - b)
        assert (ia * ib).contains(a * b)
        assert abs(ia).contains(abs(a))
        assert ia.pow_int(3).contains(a**3)


def test_compare_reals_and_sqrt():
    s2 = sqrt_real(2)
    assert compare_reals(s2, algebraic_real_from_poly(poly(-2, 0, 1), 1, 2)) == 0
    lo, hi = s2.enclosure(80)
    assert F(14142135623, 10**10) < lo <= hi < F(14142135624, 10**10)
    assert compare_reals(s2, algebraic_real_from_poly(poly(-3, 0, 1), 1, 2)) < 0


# ---------------------------------------------------------------------------
# binary series targets
# ---------------------------------------------------------------------------


def test_series_exponent_ladder():
    xi1 = LiouvilleBinary(1, 2, 2)  # b = 6
    xi2 = LiouvilleBinary(2, 2, 2)
    assert xi1.term_exponents(6) == [2, 14, 88, 529, 3174, 19047]
    assert xi2.term_exponents(3) == [6, 36, 216]
    # the merged ladder is the floor of b^(l/2)
    for ell, want in [(1, 2), (2, 6), (3, 14), (4, 36), (5, 88)]:
        j = 1 if ell % 2 else 2
        i = (ell - j) // 2
        assert oracles.nth_root_floor(6**ell, 2) == want
        assert LiouvilleBinary(j, 2, 2).exponent(j + 2 * i) == want


def test_series_exponents_strictly_increase():
    for n, t in [(2, 1), (2, 2), (3, 2), (4, 3)]:
        for j in range(1, t + 1):
            exps = LiouvilleBinary(j, t, n).term_exponents(8)
            assert all(a < b for a, b in zip(exps, exps[1:]))


def test_series_partial_sum_and_tail():
    xi1 = LiouvilleBinary(1, 2, 2)
    assert xi1.partial_sum(1) == F(1, 4)
    assert xi1.partial_sum(2) == F(1, 4) + F(1, 2**14)
    total, tail = xi1.truncation(2)
    assert total == xi1.partial_sum(2)
    assert tail <= F(1, 2**35)  # next exponent is 88


def test_series_partial_sum_height_is_power_of_two():
    # H(partial sum) = 2^(last exponent): denominator exact, numerator odd
    for j, t, n in [(1, 2, 2), (2, 2, 2), (1, 2, 3)]:
        xi = LiouvilleBinary(j, t, n)
        exps = xi.term_exponents(4)
        for k in range(1, 5):
            s = xi.partial_sum(k)
            assert s.denominator == 2 ** exps[k - 1]
            assert s.numerator % 2 == 1
            assert s.numerator < s.denominator


def test_series_enclosure_brackets_partial_sums():
    xi = LiouvilleBinary(1, 2, 2)
    lo, hi = xi.enclosure(100)
    assert lo <= xi.partial_sum(3) <= xi.partial_sum(4) <= hi
    assert not xi.is_rational()
