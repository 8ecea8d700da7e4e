"""Coprimality gap, factor-chain stabilization, and product-space heights.

Three independent tools with one common theme: every existential
constant is replaced by a number computed on the spot.

* :func:`resultant_gap_check` certifies the gap inequality
  ``1 <= (2n)! * max(|P(xi)|/||P||, |Q(xi)|/||Q||) * H(P)^deg(Q) * H(Q)^deg(P)``
  for coprime P, Q.  The inequality is a theorem, so a certified failure
  is reported as :class:`~dioph.errors.TheoremViolation`.
* :func:`factor_chain_step` runs an online stabilization procedure over
  a finite stream of small-valued polynomials: each step factors the
  input, selects the monic irreducible factor with the smallest
  weighted value at xi, and uses the gap inequality to decide whether
  the selection has stabilized.
* :func:`minor_module_generation` checks that the order-k minors of the
  banded k x (k+l) coefficient matrix generate all homogeneous integer
  forms of degree k, and :func:`product_space_height_check` turns the
  resulting integer change-of-basis matrices into an explicit two-sided
  comparison of H(P * E_{k-1}) with H(P)^k.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, replace
from fractions import Fraction
from math import factorial
from typing import Callable, Optional, Union

from . import _linalg
from .errors import (
    CapExceeded,
    DegreeOverflow,
    NotCoprime,
    PreconditionFailed,
    TheoremViolation,
    UndecidableTie,
    ZeroPolynomial,
)
from .exactnum import (
    AlgebraicReal,
    RatPoly,
    RealNumber,
    as_real,
    exp_iv,
    factor_over_rationals,
    resultant,
)
from .exactnum.dyadic import Iv, iv_max, precision_cap
from .heights import _lt_exp_times, height_matrix, height_polynomial
from .serialize import rational_str

Scalar = Union[Fraction, Iv]


def _sup_ratio_exact(p: RatPoly, xi: Fraction) -> Fraction:
    """|P(xi)| / ||P||_inf, exactly."""
    return abs(p(xi)) / p.max_norm()


def _sup_ratio_iv(p: RatPoly, xi: RealNumber, prec: int) -> Iv:
    return abs(p(xi.enclosure(prec))) * (1 / p.max_norm())


def _e_pow(k: int, prec: int) -> Iv:
    return Iv.point(Fraction(1)) if k == 0 else exp_iv(k, prec)


# --- resultant gap -----------------------------------------------------------


@dataclass(frozen=True)
class GapCheckReport:
    """Record of one certified gap inequality."""

    degree_cap: int
    gap_constant: int  # (2n)!
    resultant: Fraction
    max_ratio: Scalar
    rhs: Scalar
    holds: bool

    def to_json_dict(self) -> dict:
        def enc(x):
            if isinstance(x, Iv):
                return {"lo": rational_str(x.lo), "hi": rational_str(x.hi)}
            return rational_str(x)

        return {
            "degree_cap": self.degree_cap,
            "gap_constant": self.gap_constant,
            "resultant": rational_str(self.resultant),
            "max_ratio": enc(self.max_ratio),
            "rhs": enc(self.rhs),
            "holds": self.holds,
        }


def resultant_gap_check(
    p: RatPoly, q: RatPoly, xi, n: Optional[int] = None
) -> GapCheckReport:
    """Certify 1 <= (2n)! * max-ratio * H(P)^deg(Q) * H(Q)^deg(P).

    P and Q must be nonzero and coprime (checked through the
    resultant).  The inequality is a theorem for coprime inputs, so a
    certified violation raises :class:`TheoremViolation`; for
    irrational xi the right side is squeezed until it clears 1.
    """
    if p.is_zero() or q.is_zero():
        raise ZeroPolynomial("gap check needs nonzero polynomials")
    if n is None:
        n = max(p.degree, q.degree)
    if p.degree > n or q.degree > n:
        raise DegreeOverflow(f"degrees must be <= {n}")
    res = resultant(p, q)
    if res == 0:
        raise NotCoprime("polynomials share a factor; the gap bound is vacuous")

    c3 = factorial(2 * n)
    h_p = height_polynomial(p).value
    h_q = height_polynomial(q).value
    height_part = Fraction(c3) * h_p**q.degree * h_q**p.degree
    xi = as_real(xi)

    if xi.is_rational():
        x = xi.as_fraction()
        ratio = max(_sup_ratio_exact(p, x), _sup_ratio_exact(q, x))
        rhs = ratio * height_part
        if rhs < 1:
            raise TheoremViolation(f"gap bound fails: {rhs} < 1 on coprime inputs")
        return GapCheckReport(n, c3, res, ratio, rhs, True)

    prec = 32
    cap = 4 * precision_cap()
    while True:
        ratio = iv_max(_sup_ratio_iv(p, xi, prec), _sup_ratio_iv(q, xi, prec))
        rhs = ratio * height_part
        if rhs.lo >= 1:
            return GapCheckReport(n, c3, res, ratio, rhs, True)
        if rhs.hi < 1:
            raise TheoremViolation("gap bound certified below 1 on coprime inputs")
        if prec > cap:
            raise UndecidableTie("gap bound sits on the boundary value 1")
        prec *= 2


# --- factor chain ------------------------------------------------------------

TRACKING = "tracking"
STABILIZED = "stabilized"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ChainStep:
    scale: Fraction  # the height budget X of this step
    poly: RatPoly
    hypothesis_holds: bool
    selected: Optional[RatPoly]  # monic irreducible, None when inconclusive
    declared_equal: bool
    status: str

    def to_json_dict(self) -> dict:
        return {
            "scale": rational_str(self.scale),
            "poly": [rational_str(c) for c in self.poly.coeffs],
            "hypothesis_holds": self.hypothesis_holds,
            "selected": None
            if self.selected is None
            else [rational_str(c) for c in self.selected.coeffs],
            "declared_equal": self.declared_equal,
            "status": self.status,
        }


@dataclass(frozen=True)
class FactorChainState:
    """Online state of the stabilization procedure.

    ``candidate`` is the last selected monic irreducible factor.  The
    status reflects the latest step: it confirmed the candidate
    (stabilized), replaced it (tracking), or failed the smallness
    hypothesis (inconclusive, candidate retained).
    """

    n: int
    xi: RealNumber
    steps: tuple[ChainStep, ...] = ()
    candidate: Optional[RatPoly] = None
    status: str = TRACKING

    @classmethod
    def start(cls, n: int, xi) -> "FactorChainState":
        if n < 1:
            raise PreconditionFailed("need degree cap n >= 1")
        return cls(n=n, xi=as_real(xi))

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "status": self.status,
            "candidate": None
            if self.candidate is None
            else [rational_str(c) for c in self.candidate.coeffs],
            "steps": [s.to_json_dict() for s in self.steps],
        }


def _hypothesis_holds(p: RatPoly, xi: RealNumber, scale: Fraction, n: int) -> bool:
    """|P(xi)|/||P|| <= c^-1 H(P)^-n X^-deg(P), c = e^{2n(n+1)} ((2n)!)^n."""
    h = height_polynomial(p).value
    weight = h**n * scale**p.degree * Fraction(factorial(2 * n)) ** n
    exponent = 2 * n * (n + 1)
    if xi.is_rational():
        ratio = _sup_ratio_exact(p, xi.as_fraction())
        if ratio == 0:
            return True
        # holds  <=>  ratio * weight * e^exponent <= 1
        return not _lt_exp_times(Fraction(1), exponent, ratio * weight)
    prec = 32
    cap = 4 * precision_cap()
    while True:
        lhs = _sup_ratio_iv(p, xi, prec) * weight * exp_iv(exponent, prec)
        if lhs.hi <= 1:
            return True
        if lhs.lo > 1:
            return False
        if prec > cap:
            raise UndecidableTie("hypothesis comparison hit the precision cap")
        prec *= 2


@dataclass(frozen=True)
class _Candidate:
    """Selection value rational_part * e^exp with a certified evaluator."""

    poly: RatPoly
    exp: int
    exact: Optional[Fraction]  # rational part, when exactly known
    approx: Optional[Callable[[int], Iv]]  # enclosure of the rational part

    def enclosure(self, prec: int) -> Iv:
        if self.exact is not None:
            base = Iv.point(self.exact)
        else:
            base = self.approx(prec)
        return base * _e_pow(self.exp, prec)


def _candidate_for(q: RatPoly, xi: RealNumber, scale: Fraction, n: int) -> _Candidate:
    h_q = height_polynomial(q).value
    weight = h_q**n * scale**q.degree
    exp = (n + 1) * q.degree
    if xi.is_rational():
        return _Candidate(q, exp, _sup_ratio_exact(q, xi.as_fraction()) * weight, None)
    if isinstance(xi, AlgebraicReal) and (q % xi.min_poly()).is_zero():
        return _Candidate(q, exp, Fraction(0), None)
    return _Candidate(q, exp, None, lambda prec: _sup_ratio_iv(q, xi, prec) * weight)


def _exact_less(a_rp: Fraction, a_exp: int, b_rp: Fraction, b_exp: int) -> bool:
    """Is a_rp * e^a_exp strictly below b_rp * e^b_exp?  Exact rationals."""
    if a_rp == 0:
        return b_rp != 0
    if b_rp == 0:
        return False
    if a_exp == b_exp:
        return a_rp < b_rp
    if a_exp > b_exp:
        # equality is impossible across distinct powers of e
        return not _lt_exp_times(b_rp, a_exp - b_exp, a_rp)
    return _lt_exp_times(a_rp, b_exp - a_exp, b_rp)


def _candidate_less(a: _Candidate, b: _Candidate) -> bool:
    """Certified strict comparison of two selection values."""
    if a.exact is not None and b.exact is not None:
        return _exact_less(a.exact, a.exp, b.exact, b.exp)
    if a.exact == 0:
        return True  # enclosure-valued candidates are nonzero
    if b.exact == 0:
        return False
    prec = 64
    cap = 4 * precision_cap()
    while True:
        va = a.enclosure(prec)
        vb = b.enclosure(prec)
        if va.hi < vb.lo:
            return True
        if va.lo >= vb.hi:
            return False
        if prec > cap:
            raise UndecidableTie("selection values did not separate")
        prec *= 2


def factor_chain_step(state: FactorChainState, scale, p_x: RatPoly) -> FactorChainState:
    """Feed one polynomial of height <= scale into the chain.

    Factors ``p_x`` over the rationals, selects the monic irreducible
    factor Q minimizing (|Q(xi)|/||Q||) * H(Q)^n * (e^{n+1} X)^deg(Q)
    by certified comparison, then confronts the selection with the
    previous one: literal equality confirms the candidate, and a
    certified failure of the coprimality gap bound on a distinct pair
    forces the declared-equal verdict.  Decidable ties go to the first
    factor in (degree, coefficient) order, so the trajectory is a
    deterministic function of the input stream.
    """
    scale = Fraction(scale)
    n = state.n
    if p_x.is_zero():
        raise ZeroPolynomial("chain input must be nonzero")
    if p_x.degree > n:
        raise DegreeOverflow(f"chain inputs have degree <= {n}")
    if height_polynomial(p_x).value > scale:
        raise PreconditionFailed("H(P) exceeds the declared scale")

    if not _hypothesis_holds(p_x, state.xi, scale, n):
        step = ChainStep(scale, p_x, False, None, False, INCONCLUSIVE)
        return replace(state, steps=state.steps + (step,), status=INCONCLUSIVE)

    _, factors = factor_over_rationals(p_x)
    if not factors:  # constants never pass the hypothesis, but stay safe
        step = ChainStep(scale, p_x, True, None, False, INCONCLUSIVE)
        return replace(state, steps=state.steps + (step,), status=INCONCLUSIVE)

    best = None
    for q, _mult in factors:  # (degree, coeffs) order: first win = tie rule
        cand = _candidate_for(q, state.xi, scale, n)
        if best is None or _candidate_less(cand, best):
            best = cand
    selected = best.poly

    prev = state.candidate
    declared_equal = False
    if prev is None:
        status = TRACKING
        candidate = selected
    elif selected == prev:
        status = STABILIZED
        candidate = prev
    elif _gap_consistent(prev, selected, state.xi, n):
        status = TRACKING
        candidate = selected
    else:
        # the gap bound rules out coprimality, and distinct monic
        # irreducibles are always coprime, so the pair must coincide
        declared_equal = True
        status = STABILIZED
        candidate = prev
    step = ChainStep(scale, p_x, True, selected, declared_equal, status)
    return replace(
        state, steps=state.steps + (step,), candidate=candidate, status=status
    )


def _gap_consistent(p: RatPoly, q: RatPoly, xi: RealNumber, n: int) -> bool:
    """Does the gap bound tolerate P, Q being coprime?

    Unlike :func:`resultant_gap_check`, a certified value below 1 is an
    answer here (it forces the declared-equal transition), not a hard
    failure.
    """
    h_part = Fraction(factorial(2 * n)) * height_polynomial(p).value ** q.degree
    h_part *= height_polynomial(q).value ** p.degree
    if xi.is_rational():
        x = xi.as_fraction()
        return max(_sup_ratio_exact(p, x), _sup_ratio_exact(q, x)) * h_part >= 1
    prec = 32
    cap = 4 * precision_cap()
    while True:
        rhs = iv_max(_sup_ratio_iv(p, xi, prec), _sup_ratio_iv(q, xi, prec)) * h_part
        if rhs.lo >= 1:
            return True
        if rhs.hi < 1:
            return False
        if prec > cap:
            raise UndecidableTie("gap comparison sits on the boundary")
        prec *= 2


# --- minor lattice generation ------------------------------------------------

_MINOR_CAP = 7  # largest k + l for the symbolic minor expansion


def _monomials(num_vars: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent vectors of the degree-k monomials, lexicographic."""
    if num_vars == 1:
        return [(degree,)]
    out = []
    for first in range(degree, -1, -1):
        for rest in _monomials(num_vars - 1, degree - first):
            out.append((first,) + rest)
    return out


def _symbolic_minor(columns: tuple[int, ...], k: int, l: int) -> dict:
    """Order-k minor of the banded matrix, as {exponent vector: int}.

    The band has entry x_{j-i} at row i, column j (zero outside
    0 <= j - i <= l); the minor is expanded recursively along rows.
    """
    acc: dict[tuple[int, ...], int] = {}

    def expand(row: int, remaining: tuple[int, ...], sign: int, expo: list[int]):
        if row == k:
            key = tuple(expo)
            acc[key] = acc.get(key, 0) + sign
            return
        for pos, col in enumerate(remaining):
            var = col - row
            if 0 <= var <= l:
                expo[var] += 1
                expand(
                    row + 1,
                    remaining[:pos] + remaining[pos + 1 :],
                    sign if pos % 2 == 0 else -sign,
                    expo,
                )
                expo[var] -= 1

    expand(0, columns, 1, [0] * (l + 1))
    return {key: val for key, val in acc.items() if val}


@functools.lru_cache(maxsize=None)
def _minor_monomial_transform(k: int, l: int):
    """Integer matrix expressing order-k minors in degree-k monomials.

    Rows are indexed by the column subsets of the banded k x (k+l)
    matrix, columns by the degree-k monomials in x_0..x_l; the two
    counts agree, so the matrix is square.  Returns (rows, monomials).
    """
    if k < 1 or l < 0:
        raise PreconditionFailed("need k >= 1 and l >= 0")
    if k + l > _MINOR_CAP:
        raise CapExceeded(f"minor expansion capped at k + l <= {_MINOR_CAP}")
    monos = _monomials(l + 1, k)
    index = {m: j for j, m in enumerate(monos)}
    rows = []
    for columns in itertools.combinations(range(k + l), k):
        minor = _symbolic_minor(columns, k, l)
        row = [0] * len(monos)
        for expo, coeff in minor.items():
            row[index[expo]] = coeff
        rows.append(row)
    return tuple(map(tuple, rows)), tuple(monos)


def minor_module_generation(k: int, l: int) -> bool:
    """Do the order-k minors generate all degree-k integer forms?

    Computes the Hermite normal form of the minor/monomial coefficient
    matrix; the answer is yes exactly when the row lattice is the full
    integer module, i.e. the HNF is the identity.
    """
    rows, monos = _minor_monomial_transform(k, l)
    return _linalg.is_identity(_linalg.hnf(rows), len(monos))


@functools.lru_cache(maxsize=None)
def _transform_row_bounds(k: int, l: int) -> tuple[Fraction, Fraction]:
    """(c_upper, c_lower): max absolute row sums, forward and inverse."""
    rows, monos = _minor_monomial_transform(k, l)
    if not _linalg.is_identity(_linalg.hnf(rows), len(monos)):
        raise TheoremViolation(f"minors fail to generate at (k, l) = ({k}, {l})")
    inverse = _linalg.mat_inverse([[Fraction(x) for x in row] for row in rows])
    for row in inverse:
        for x in row:
            if x.denominator != 1:
                raise TheoremViolation("inverse transform is not integral")
    c_upper = max(sum(abs(x) for x in row) for row in rows)
    c_lower = max(sum(abs(x) for x in row) for row in inverse)
    return Fraction(c_upper), Fraction(c_lower)


def product_height_lower_constant(k: int, l: int) -> Fraction:
    """Effective c with H(P)^k <= c * H(P * E_{k-1}) for deg P = l."""
    return _transform_row_bounds(k, l)[1]


@dataclass(frozen=True)
class ProductHeightCheck:
    rows: int  # k
    poly_degree: int  # l
    space_height: Fraction  # H(P * E_{k-1})
    power_height: Fraction  # H(P)^k
    c_upper: Fraction
    c_lower: Fraction

    @property
    def ratio(self) -> Fraction:
        return self.space_height / self.power_height

    def to_json_dict(self) -> dict:
        return {
            "rows": self.rows,
            "poly_degree": self.poly_degree,
            "space_height": rational_str(self.space_height),
            "power_height": rational_str(self.power_height),
            "c_upper": rational_str(self.c_upper),
            "c_lower": rational_str(self.c_lower),
            "ratio": rational_str(self.ratio),
        }


def product_multiplication_rows(p: RatPoly, k: int) -> list[list[Fraction]]:
    """Coefficient rows of P, T*P, ..., T^(k-1)*P inside E_{deg P + k - 1}."""
    vec = list(p.vector(p.degree))
    return [[Fraction(0)] * i + vec + [Fraction(0)] * (k - 1 - i) for i in range(k)]


def product_space_height_check(
    p: RatPoly, k: int
) -> tuple[Fraction, Fraction, ProductHeightCheck]:
    """Compare H(P * E_{k-1}) with H(P)^k through explicit constants.

    The two agree at every finite place; at the Archimedean place they
    differ by at most the row-sum norms of the integer change-of-basis
    matrices between order-k minors and degree-k monomials.  Both
    one-sided bounds are asserted exactly.
    """
    if p.is_zero():
        raise ZeroPolynomial("product-space height of the zero polynomial")
    if k < 1:
        raise PreconditionFailed("need k >= 1")
    c_upper, c_lower = _transform_row_bounds(k, p.degree)
    space_height = height_matrix(product_multiplication_rows(p, k)).value
    power_height = height_polynomial(p).value ** k
    if space_height > c_upper * power_height:
        raise TheoremViolation("H(P*E) exceeds the minor-expansion bound")
    if power_height > c_lower * space_height:
        raise TheoremViolation("H(P)^k exceeds the generation bound")
    return (
        space_height,
        power_height,
        ProductHeightCheck(k, p.degree, space_height, power_height, c_upper, c_lower),
    )
