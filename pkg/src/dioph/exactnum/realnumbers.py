"""Certified real numbers: rationals, algebraic reals, lacunary binary series.

Every real number here can produce, on demand, an interval enclosure of
width below any requested 2^-prec.  Refinement never mutates shared
state observably; enclosures are memoized per object.  Comparisons with
rationals are exact (sign computations terminate because an algebraic
real that is not rational, or a lacunary series, can never equal one).
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Callable

from ..errors import CapExceeded, ZeroPolynomial
from .dyadic import Iv, int_nth_root, precision_cap
from .places import factor_positive_int
from .polynomials import RatPoly


class RealNumber:
    """Common interface: exact rationals plus two certified irrational kinds."""

    def enclosure(self, prec: int) -> Iv:
        """Interval containing the number, of width <= 2^-prec."""
        raise NotImplementedError

    def is_rational(self) -> bool:
        return False

    def as_fraction(self) -> Fraction:
        raise ValueError("not an exact rational")

    def sign_of_difference(self, r) -> int:
        """Exact sign of (self - r) for rational r."""
        raise NotImplementedError

    def compare(self, r) -> int:
        return self.sign_of_difference(r)

    def __float__(self):
        iv = self.enclosure(64)
        return float(iv.mid)


def as_real(x) -> RealNumber:
    if isinstance(x, RealNumber):
        return x
    return RationalReal(Fraction(x))


def _rational_arg(r) -> Fraction:
    """Coerce a comparison argument to an exact Fraction."""
    if isinstance(r, RealNumber):
        if r.is_rational():
            return r.as_fraction()
        raise TypeError("argument is irrational; use compare_reals instead")
    return Fraction(r)


class RationalReal(RealNumber):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = Fraction(value)

    def enclosure(self, prec: int) -> Iv:
        return Iv.point(self.value)

    def is_rational(self) -> bool:
        return True

    def as_fraction(self) -> Fraction:
        return self.value

    def sign_of_difference(self, r) -> int:
        d = self.value - _rational_arg(r)
        return (d > 0) - (d < 0)

    def __repr__(self):
        return f"RationalReal({self.value})"


class AlgebraicReal(RealNumber):
    """Simple real root of an integer polynomial, held by a sign-change
    interval.  The defining polynomial need not be irreducible, but the
    interval must contain exactly one root and that root must be
    irrational (construct through ``isolate_real_roots`` to guarantee it).
    """

    __slots__ = ("poly", "_lo", "_hi", "_slo")

    def __init__(self, poly: RatPoly, lo, hi):
        lo, hi = Fraction(lo), Fraction(hi)
        slo = _sign(poly(lo))
        shi = _sign(poly(hi))
        if slo == 0 or shi == 0 or slo == shi:
            raise ValueError("need a strict sign change on [lo, hi]")
        self.poly = poly
        self._lo = lo
        self._hi = hi
        self._slo = slo

    def enclosure(self, prec: int) -> Iv:
        target = Fraction(1, 1 << prec)
        lo, hi, slo = self._lo, self._hi, self._slo
        while hi - lo > target:
            mid = (lo + hi) / 2
            sm = _sign(self.poly(mid))
            if sm == 0:
                raise ValueError(
                    "rational root hit during refinement; build algebraic "
                    "reals through isolate_real_roots"
                )
            if sm == slo:
                lo = mid
            else:
                hi = mid
        self._lo, self._hi, self._slo = lo, hi, slo
        return Iv(lo, hi)

    def sign_of_difference(self, r) -> int:
        r = _rational_arg(r)
        if self.poly(r) == 0 and self._lo <= r <= self._hi:
            return 0
        lo, hi = self._lo, self._hi
        while lo <= r <= hi:
            self.enclosure_step()
            lo, hi = self._lo, self._hi
            if self.poly(r) == 0 and lo <= r <= hi:
                return 0
        return 1 if lo > r else -1

    def enclosure_step(self):
        mid = (self._lo + self._hi) / 2
        sm = _sign(self.poly(mid))
        if sm == 0:
            raise ValueError("rational root hit during refinement")
        if sm == self._slo:
            self._lo = mid
        else:
            self._hi = mid

    def min_poly(self) -> RatPoly:
        """Monic minimal polynomial of this number (degree >= 2)."""
        from .polynomials import factor_over_rationals

        _, factors = factor_over_rationals(self.poly)
        for f, _m in factors:
            lo, hi = self._lo, self._hi
            if _sign(f(lo)) * _sign(f(hi)) < 0:
                return f
        raise ZeroPolynomial("no factor changes sign on the isolating interval")

    def __repr__(self):
        return f"AlgebraicReal({self.poly!r} on [{self._lo}, {self._hi}])"


class LiouvilleBinary(RealNumber):
    """The lacunary series sum_i 2^(-a(j + t*i)) with a(m) = floor(b^(m/t)),
    b = (t+1)*n.  These are extremely well approximable numbers used as
    adversarial approximation targets.
    """

    __slots__ = ("j", "t", "n", "b")

    def __init__(self, j: int, t: int, n: int):
        if not (1 <= j <= t):
            raise ValueError("need 1 <= j <= t")
        if n < 1:
            raise ValueError("need n >= 1")
        self.j = j
        self.t = t
        self.n = n
        self.b = (t + 1) * n

    def exponent(self, m: int) -> int:
        """a(m) = floor(b^(m/t)), exact."""
        return int_nth_root(self.b**m, self.t)

    def term_exponents(self, count: int) -> list[int]:
        return [self.exponent(self.j + self.t * i) for i in range(count)]

    def partial_sum(self, terms: int) -> Fraction:
        return sum(
            (Fraction(1, 1 << a) for a in self.term_exponents(terms)), Fraction(0)
        )

    def truncation(self, terms: int) -> tuple[Fraction, Fraction]:
        """(partial sum, certified tail upper bound 2^(1 - a_next))."""
        if terms < 1:
            raise ValueError("need at least one term")
        s = self.partial_sum(terms)
        a_next = self.exponent(self.j + self.t * terms)
        return s, Fraction(2, 1 << a_next)

    def enclosure(self, prec: int) -> Iv:
        terms = 1
        while True:
            a_next = self.exponent(self.j + self.t * terms)
            if a_next - 1 >= prec:
                s = self.partial_sum(terms)
                return Iv(s, s + Fraction(1, 1 << (a_next - 1)))
            terms += 1

    def sign_of_difference(self, r) -> int:
        r = _rational_arg(r)
        prec = 8
        cap = precision_cap()
        while True:
            iv = self.enclosure(prec)
            if r < iv.lo:
                return 1
            if r > iv.hi:
                return -1
            if prec > cap * 64:
                # the series is irrational, so this cannot persist unless
                # the exponent sequence grows absurdly; bail out loudly
                raise CapExceeded("lacunary comparison exceeded precision budget")
            prec *= 2

    def __repr__(self):
        return f"LiouvilleBinary(j={self.j}, t={self.t}, n={self.n})"


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def refine_until(x: RealNumber, decide: Callable[[Iv], object], start: int = 8):
    """Refine enclosures until ``decide`` returns a non-None verdict."""
    cap = precision_cap()
    prec = start
    while prec <= cap:
        verdict = decide(x.enclosure(prec))
        if verdict is not None:
            return verdict
        prec *= 2
    raise CapExceeded(f"undecided after refining to 2^-{cap}")


def compare_reals(a: RealNumber, b: RealNumber) -> int:
    """Exact comparison of two certified reals.

    Rational-vs-anything and algebraic-vs-algebraic comparisons always
    terminate with an exact answer (the latter via a gcd certificate when
    the values coincide).  Comparisons involving a lacunary series only
    terminate when the values differ; equal-looking pairs beyond the
    precision cap raise ``CapExceeded``.
    """
    a, b = as_real(a), as_real(b)
    if a is b:
        return 0
    if a.is_rational():
        return -b.sign_of_difference(a.as_fraction())
    if b.is_rational():
        return a.sign_of_difference(b.as_fraction())
    if (
        isinstance(a, LiouvilleBinary)
        and isinstance(b, LiouvilleBinary)
        and (a.j, a.t, a.n) == (b.j, b.t, b.n)
    ):
        return 0
    both_algebraic = isinstance(a, AlgebraicReal) and isinstance(b, AlgebraicReal)
    common = None
    if both_algebraic:
        g = a.poly.gcd(b.poly)
        if g.degree >= 1:
            common = g.squarefree_part()
    cap = precision_cap()
    prec = 8
    while prec <= 4 * cap:
        ia, ib = a.enclosure(prec), b.enclosure(prec)
        if ia.hi < ib.lo:
            return -1
        if ib.hi < ia.lo:
            return 1
        if common is not None:
            lo, hi = max(ia.lo, ib.lo), min(ia.hi, ib.hi)
            if lo < hi and _sign(common(lo)) * _sign(common(hi)) < 0:
                # a shared root of both defining polynomials lies in the
                # overlap; by isolation it equals both numbers
                return 0
        prec *= 2
    if both_algebraic and common is None:
        # defining polynomials are coprime, so the values differ, yet the
        # enclosures refused to separate: that is a refinement bug
        raise CapExceeded("coprime algebraic reals failed to separate")
    raise CapExceeded("could not separate two real numbers")


# --- exact real root isolation (Descartes / bisection) --------------------


def _descartes_variations(coeffs: list[int]) -> int:
    count = 0
    prev = 0
    for c in coeffs:
        s = _sign(c)
        if s and prev and s != prev:
            count += 1
        if s:
            prev = s
    return count


def _taylor_shift_1(coeffs: list[int]) -> list[int]:
    """Coefficients of P(x + 1), integer Horner scheme."""
    out = list(coeffs)
    n = len(out)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            out[j] += out[j + 1]
    return out


def _variations_on_01(coeffs: list[int]) -> int:
    """Descartes bound for the number of roots in the open interval (0,1)."""
    rev = list(reversed(coeffs))
    return _descartes_variations(_taylor_shift_1(rev))


def _half_left(coeffs: list[int]) -> list[int]:
    """2^n * P(x/2): maps [0,1] questions to the left half."""
    n = len(coeffs) - 1
    return [c << (n - i) for i, c in enumerate(coeffs)]


def divisors_of(n: int) -> list[int]:
    fact = factor_positive_int(n)
    divs = [1]
    for p, k in fact.items():
        divs = [d * p**e for d in divs for e in range(k + 1)]
    return sorted(divs)


def _rational_roots(p: RatPoly) -> list[Fraction]:
    """All rational roots of an integer polynomial, exact."""
    roots = []
    while p[0] == 0 and p.degree >= 1:
        if Fraction(0) not in roots:
            roots.append(Fraction(0))
        p = RatPoly(p.coeffs[1:])
    if p.degree < 1:
        return roots
    a0 = abs(int(p[0]))
    an = abs(int(p.leading()))
    for den in divisors_of(an):
        for num in divisors_of(a0):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if p(cand) == 0 and cand not in roots:
                    roots.append(cand)
    return sorted(roots)


def isolate_real_roots(
    p: RatPoly, region: tuple | None = None
) -> list[RealNumber]:
    """All real roots of P (distinct), sorted increasing, certified.

    Rational roots come back as :class:`RationalReal`, irrational ones as
    :class:`AlgebraicReal` with disjoint sign-change intervals.  With
    ``region=(lo, hi)`` only roots in the closed region are returned.
    """
    if p.is_zero():
        raise ZeroPolynomial("every number is a root of zero")
    if p.degree == 0:
        return []
    sq = p.squarefree_part()
    _, prim = sq.content_and_primitive()

    rational = _rational_roots(prim)
    cofactor = prim
    for r in rational:
        cofactor = cofactor // RatPoly((-r, 1))
    if cofactor.degree >= 1:
        _, cofactor = cofactor.content_and_primitive()

    algebraic: list[AlgebraicReal] = []
    if cofactor.degree >= 1:
        ints = [int(c) for c in cofactor.coeffs]
        bound = 2 + max(abs(c) for c in ints) // abs(ints[-1])
        size = 1
        while size < 2 * bound:
            size <<= 1
        # normalize to [0, 1]: Q(x) = P(-size/2 + size*x) keeps integers
        work = RatPoly(ints).compose_linear(size, -size // 2)
        q0 = [int(c) for c in work.coeffs]
        stack = [(Fraction(-size, 2), Fraction(size), q0)]
        while stack:
            lo, width, q = stack.pop()
            v = _variations_on_01(q)
            if v == 0:
                continue
            if v == 1:
                a, b = lo, lo + width
                # endpoints are never roots: rational roots were removed
                algebraic.append(AlgebraicReal(cofactor, a, b))
                continue
            left = _half_left(q)
            right = _taylor_shift_1(left)
            mid = lo + width / 2
            # exact dyadic midpoint root would be rational: impossible here
            stack.append((mid, width / 2, right))
            stack.append((lo, width / 2, left))

    roots: list[RealNumber] = [RationalReal(r) for r in rational]
    roots.extend(algebraic)
    _sort_separated(roots)
    if region is not None:
        lo, hi = Fraction(region[0]), Fraction(region[1])
        roots = [x for x in roots if x.compare(lo) >= 0 and x.compare(hi) <= 0]
    return roots


def _sort_separated(roots: list[RealNumber]) -> None:
    """Sort certified reals in place, separating enclosures as needed."""
    import functools

    roots.sort(key=functools.cmp_to_key(compare_reals))


def algebraic_real_from_poly(p: RatPoly, lo, hi) -> RealNumber:
    """The unique root of P in [lo, hi]; picks the exact kind."""
    found = isolate_real_roots(p, region=(Fraction(lo), Fraction(hi)))
    if len(found) != 1:
        raise ValueError(f"expected exactly one root in [{lo}, {hi}], got {len(found)}")
    return found[0]


def sqrt_real(n: int) -> RealNumber:
    """sqrt(n) as a certified real (rational when n is a perfect square)."""
    if n < 0:
        raise ValueError("no real square root")
    r = isqrt(n)
    if r * r == n:
        return RationalReal(r)
    return algebraic_real_from_poly(RatPoly((-n, 0, 1)), r, r + 1)
