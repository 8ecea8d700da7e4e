"""Places of Q and normalized absolute values.

A place is either the archimedean absolute value or a p-adic one.  The
normalization gives |p|_p = 1/p, so that prod_v |x|_v = 1 for every
nonzero rational x (the product formula).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from ..errors import ZeroInput

_SMALL_PRIME_BOUND = 1 << 20


@dataclass(frozen=True)
class Place:
    """A place of Q.  ``p`` is None for the archimedean place."""

    p: int | None

    @staticmethod
    def infinite() -> "Place":
        return Place(p=None)

    @staticmethod
    def finite(p: int) -> "Place":
        if p < 2 or not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        return Place(p=p)

    def __lt__(self, other: "Place"):
        # archimedean place sorts first, then primes in increasing order
        if self.p is None:
            return other.p is not None
        if other.p is None:
            return False
        return self.p < other.p

    @property
    def is_infinite(self) -> bool:
        return self.p is None

    @property
    def label(self) -> str:
        return "inf" if self.p is None else str(self.p)

    def __repr__(self):
        return f"Place({self.label})"


INF = Place.infinite()


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factor_positive_int(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1; trial division with sympy fallback."""
    if n < 1:
        raise ZeroInput("factor_positive_int needs n >= 1")
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 7
    increments = (4, 2, 4, 2, 4, 6, 2, 6)  # 30-wheel from 7
    i = 0
    while f * f <= n and f <= _SMALL_PRIME_BOUND:
        if n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        else:
            f += increments[i]
            i = (i + 1) % 8
    if n > 1:
        if n <= _SMALL_PRIME_BOUND * _SMALL_PRIME_BOUND or _is_prime(n):
            out[n] = out.get(n, 0) + 1
        else:
            from sympy import factorint  # heavy, only for large survivors

            for p, k in factorint(n).items():
                out[int(p)] = out.get(int(p), 0) + int(k)
    return out


def ord_p(x: Fraction, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    if x == 0:
        raise ZeroInput("ord_p(0) is +infinity")
    v = 0
    n = x.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = x.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


def abs_at_place(x: Fraction, place: Place) -> Fraction:
    """Normalized absolute value |x|_v, exact."""
    x = Fraction(x)
    if x == 0:
        return Fraction(0)
    if place.is_infinite:
        return abs(x)
    return Fraction(1, place.p) ** ord_p(x, place.p)


def support(x: Fraction) -> list[Place]:
    """Places where |x|_v != 1, archimedean place first."""
    x = Fraction(x)
    if x == 0:
        raise ZeroInput("support of zero is every place")
    places = []
    if abs(x) != 1:
        places.append(INF)
    primes = set(factor_positive_int(abs(x.numerator))) | set(
        factor_positive_int(x.denominator)
    )
    places.extend(Place.finite(p) for p in sorted(primes))
    return places


def iter_norms(x: Fraction) -> Iterator[tuple[Place, Fraction]]:
    for v in support(x):
        yield v, abs_at_place(x, v)


def product_formula_check(x: Fraction) -> bool:
    """Exact check that prod over all places of |x|_v equals 1."""
    x = Fraction(x)
    if x == 0:
        raise ZeroInput("product formula is about nonzero numbers")
    prod = Fraction(1)
    for _, nv in iter_norms(x):
        prod *= nv
    return prod == 1
