"""Exact univariate polynomials over Q.

Coefficients are stored ascending (index = degree of the monomial) as an
immutable tuple of ``Fraction`` with no trailing zeros; the zero
polynomial is the empty tuple and has degree -1.  Ambient-degree data
(a polynomial viewed inside the space E_n of polynomials of degree at
most n) is passed explicitly to the operations that need it.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial, gcd, lcm
from typing import Iterable, Sequence

from .. import _linalg
from ..errors import (
    DegreeCapExceeded,
    DegreeOverflow,
    NonIntegerCoefficients,
    ZeroPolynomial,
)
from .dyadic import Iv

FACTOR_DEGREE_CAP = 8


class RatPoly:
    """Immutable polynomial with exact rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("RatPoly is immutable")

    # --- constructors ---------------------------------------------------

    @staticmethod
    def zero() -> "RatPoly":
        return RatPoly(())

    @staticmethod
    def one() -> "RatPoly":
        return RatPoly((1,))

    @staticmethod
    def monomial(k: int, c=1) -> "RatPoly":
        return RatPoly((0,) * k + (c,))

    @staticmethod
    def from_roots(roots: Iterable) -> "RatPoly":
        out = RatPoly.one()
        for r in roots:
            out = out * RatPoly((-Fraction(r), 1))
        return out

    # --- basic structure -------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def leading(self) -> Fraction:
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def vector(self, n: int) -> tuple[Fraction, ...]:
        """Coefficient vector inside E_n (length n+1)."""
        if self.degree > n:
            raise DegreeOverflow(f"degree {self.degree} exceeds ambient {n}")
        return tuple(self[k] for k in range(n + 1))

    def max_norm(self) -> Fraction:
        """The norm ||P|| = max |coefficient| (archimedean)."""
        if not self.coeffs:
            return Fraction(0)
        return max(abs(c) for c in self.coeffs)

    def is_integer(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def content_and_primitive(self) -> tuple[Fraction, "RatPoly"]:
        """Write P = c * Q with Q primitive integer, c > 0 (sign kept in Q)."""
        if not self.coeffs:
            raise ZeroPolynomial("content of the zero polynomial")
        den = lcm(*(c.denominator for c in self.coeffs))
        nums = [int(c * den) for c in self.coeffs]
        g = 0
        for x in nums:
            g = gcd(g, abs(x))
        return Fraction(g, den), RatPoly([x // g for x in nums])

    def monic(self) -> "RatPoly":
        return self * (1 / self.leading())

    # --- ring operations --------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, RatPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "RatPoly") -> "RatPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return RatPoly([c + (b[i] if i < len(b) else 0) for i, c in enumerate(a)])

    def __sub__(self, other: "RatPoly") -> "RatPoly":
        return self + (-other)

    def __neg__(self) -> "RatPoly":
        return RatPoly([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, RatPoly):
            if not self.coeffs or not other.coeffs:
                return RatPoly.zero()
            out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if a:
                    for j, b in enumerate(other.coeffs):
                        out[i + j] += a * b
            return RatPoly(out)
        return RatPoly([c * Fraction(other) for c in self.coeffs])

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "RatPoly":
        out = RatPoly.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __divmod__(self, other: "RatPoly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = RatPoly.zero()
        r = self
        d = other.degree
        inv = 1 / other.leading()
        while not r.is_zero() and r.degree >= d:
            shift = r.degree - d
            c = r.leading() * inv
            term = RatPoly.monomial(shift, c)
            q = q + term
            r = r - term * other
        return q, r

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def divides(self, other: "RatPoly") -> bool:
        if self.is_zero():
            return other.is_zero()
        return (other % self).is_zero()

    # --- calculus and evaluation -------------------------------------------

    def derivative(self, order: int = 1) -> "RatPoly":
        p = self
        for _ in range(order):
            p = RatPoly([i * c for i, c in enumerate(p.coeffs)][1:])
        return p

    def __call__(self, x):
        if isinstance(x, Iv):
            acc = Iv.point(0)
            for c in reversed(self.coeffs):
                acc = acc * x + Iv.point(c)
            return acc
        if isinstance(x, RatPoly):
            acc = RatPoly.zero()
            for c in reversed(self.coeffs):
                acc = acc * x + RatPoly((c,))
            return acc
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def taylor_coefficients(self, a, n: int | None = None):
        """Coefficients of P around ``a``: P = sum b_j (T - a)^j.

        ``a`` may be a Fraction (exact result) or an Iv (interval result).
        """
        top = self.degree if n is None else n
        return [self.derivative(j)(a) / factorial(j) for j in range(top + 1)]

    def compose_linear(self, a, b) -> "RatPoly":
        """P(a*T + b) expanded exactly (a, b rational)."""
        return self(RatPoly((Fraction(b), Fraction(a))))

    # --- gcd and squarefree -------------------------------------------------

    def gcd(self, other: "RatPoly") -> "RatPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        if a.is_zero():
            return a
        return a.monic()

    def squarefree_part(self) -> "RatPoly":
        if self.is_zero():
            raise ZeroPolynomial("squarefree part of zero")
        if self.degree == 0:
            return RatPoly.one()
        g = self.gcd(self.derivative())
        return (self // g).monic()

    def squarefree_decomposition(self) -> tuple[Fraction, tuple]:
        """Write P = c * prod S_j^j with the S_j monic, squarefree, and
        pairwise coprime.  Returns (c, ((S_j, j), ...)) listing only
        nonconstant S_j in increasing multiplicity order.
        """
        if self.is_zero():
            raise ZeroPolynomial("squarefree decomposition of zero")
        lead = self.leading()
        # Musser chain: f_i = gcd(f_{i-1}, f_{i-1}'), a_i = f_{i-1}/f_i,
        # and the multiplicity-j component is a_j / a_{j+1}.
        chain = [self.monic()]
        while chain[-1].degree > 0:
            f = chain[-1]
            chain.append(f.gcd(f.derivative()) if f.degree > 0 else RatPoly.one())
        quotients = [
            chain[i] // chain[i + 1] for i in range(len(chain) - 1)
        ]  # a_1, a_2, ...
        quotients.append(RatPoly.one())
        parts = []
        for j in range(len(quotients) - 1):
            s = (quotients[j] // quotients[j + 1]).monic()
            if s.degree > 0:
                parts.append((s, j + 1))
        return Fraction(lead), tuple(parts)

    def __repr__(self):
        if not self.coeffs:
            return "RatPoly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}*T^{i}" if i else f"{c}")
        return "RatPoly(" + " + ".join(terms) + ")"


def sylvester_matrix(p: RatPoly, q: RatPoly, dp: int | None = None, dq: int | None = None):
    """Sylvester matrix with respect to the given degrees (defaults: actual)."""
    dp = p.degree if dp is None else dp
    dq = q.degree if dq is None else dq
    if dp < p.degree or dq < q.degree:
        raise DegreeOverflow("declared degree below actual degree")
    if dp < 0 or dq < 0:
        raise ZeroPolynomial("resultant with a zero polynomial")
    size = dp + dq
    rows = []
    pc = [p[dp - j] for j in range(dp + 1)]  # descending
    qc = [q[dq - j] for j in range(dq + 1)]
    for i in range(dq):
        rows.append([Fraction(0)] * i + pc + [Fraction(0)] * (size - dp - 1 - i))
    for i in range(dp):
        rows.append([Fraction(0)] * i + qc + [Fraction(0)] * (size - dq - 1 - i))
    return rows


def resultant(p: RatPoly, q: RatPoly, dp: int | None = None, dq: int | None = None) -> Fraction:
    """Sylvester-determinant resultant with respect to declared degrees."""
    dp = p.degree if dp is None else dp
    dq = q.degree if dq is None else dq
    if dp == 0 or dq == 0:
        # empty Sylvester blocks degenerate to a power of the constant
        if dp == 0 and dq == 0:
            return Fraction(1)
        if dp == 0:
            return p[0] ** dq
        return q[0] ** dp
    return _linalg.det(sylvester_matrix(p, q, dp, dq))


def discriminant(p: RatPoly) -> Fraction:
    """disc(P) = (-1)^(n(n-1)/2) res(P, P') / lc(P)."""
    n = p.degree
    if n < 1:
        raise ZeroPolynomial("discriminant needs degree >= 1")
    if n == 1:
        return Fraction(1)
    r = resultant(p, p.derivative())
    return Fraction(-1) ** (n * (n - 1) // 2) * r / p.leading()


def factor_over_rationals(p: RatPoly):
    """Factor P into monic irreducibles over Q.

    Returns (lead, [(factor, multiplicity), ...]) with lead in Q so that
    P = lead * prod factor^multiplicity.  Factors are monic, sorted by
    (degree, coefficient tuple).  Degrees above 8 are refused: the point
    of the cap is to keep every factorization desk-checkable.
    """
    if p.is_zero():
        raise ZeroPolynomial("cannot factor the zero polynomial")
    if p.degree > FACTOR_DEGREE_CAP:
        raise DegreeCapExceeded(f"degree {p.degree} > {FACTOR_DEGREE_CAP}")
    if p.degree == 0:
        return p[0], []

    import sympy

    T = sympy.Symbol("T")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * T**i for i, c in enumerate(p.coeffs))
    content, factors = sympy.factor_list(sympy.Poly(expr, T, domain="QQ"))
    lead = Fraction(int(sympy.numer(content)), int(sympy.denom(content)))
    out = []
    for fac, mult in factors:
        coeffs = [Fraction(int(sympy.numer(c)), int(sympy.denom(c))) for c in reversed(fac.all_coeffs())]
        f = RatPoly(coeffs)
        lc = f.leading()
        lead *= lc**mult
        out.append((f.monic(), int(mult)))
    out.sort(key=lambda fm: (fm[0].degree, fm[0].coeffs))

    check = RatPoly((lead,))
    for f, m in out:
        check = check * f**m
    if check != p:
        raise NonIntegerCoefficients("factorization failed to reconstruct input")
    return lead, out


def eisenstein_prime_witness(p: RatPoly) -> int | None:
    """Smallest prime q certifying Eisenstein irreducibility, else None."""
    if not p.is_integer():
        return None
    from .places import factor_positive_int

    a0 = int(p[0])
    if a0 == 0:
        return None
    for q in sorted(factor_positive_int(abs(a0))):
        if int(p.leading()) % q == 0:
            continue
        if a0 % (q * q) == 0:
            continue
        if all(int(p[i]) % q == 0 for i in range(p.degree)):
            return q
    return None


def binomial_shift_matrix(n: int, xi, sign: int = 1):
    """Matrix of the basis change between powers of T and powers of (T - xi).

    Entry (a, i) is C(i, a) * (sign*xi)^(i-a) for 0 <= a <= i <= n; with
    sign=+1 it expresses T^i in the basis (T-xi)^a.  ``xi`` may be a
    Fraction or an Iv.
    """
    interval = isinstance(xi, Iv)
    base = xi * sign if interval else Fraction(sign) * Fraction(xi)
    zero = Iv.point(0) if interval else Fraction(0)

    def power(k):
        return base.pow_int(k) if interval else base**k

    return [
        [comb(i, a) * power(i - a) if i >= a else zero for i in range(n + 1)]
        for a in range(n + 1)
    ]
