"""Bilinear pairing, Hankel rank structure, and divisor extraction.

Everything here is driven by one scalar pairing on polynomials of
degree <= n,

    g(P, Q) = sum_{j=0}^n (-1)^j P^(j)(a) Q^(n-j)(a),

whose value does not depend on the evaluation point a.  Fixing Q and
expanding in the monomial basis turns the orthogonality conditions
``g(T^m G, Q) = 0`` into Hankel systems; the rank profile of those
systems detects when all small-valued polynomials share a common
divisor, and the divisor is pulled out of an exact kernel.

The module keeps two parallel matrix families: M_l built from exact
rational data at 0, and N_l built from evaluations at xi.  All rank
decisions happen on the M side (fraction-free, exact); the N side only
enters certified norm inequalities.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Optional, Sequence, Union

from . import _linalg
from .convexbody import (
    BodySpec,
    _enumerate_box,
    first_minimum_condition,
    first_minimum_witness,
    membership,
)
from .errors import (
    CounterexampleFound,
    DegreeOverflow,
    DidNotDrop,
    NonIntegerCoefficients,
    NoRankDrop,
    PreconditionFailed,
    SearchExhausted,
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
)
from .exactnum.dyadic import Iv, iv_max, precision_cap
from .gelfond import product_height_lower_constant
from .heights import (
    SubspaceRep,
    _lt_exp_times,
    height_matrix,
    height_polynomial,
    height_subspace,
)
from .serialize import rational_str

Scalar = Union[Fraction, Iv]


def _scalar_json(x: Scalar):
    if isinstance(x, Iv):
        return {"lo": rational_str(x.lo), "hi": rational_str(x.hi)}
    return rational_str(x)


# --- the pairing -------------------------------------------------------------


def bilinear_pairing(p: RatPoly, q: RatPoly, n: int, at=0, prec: int = 64) -> Scalar:
    """g(P, Q) = sum_j (-1)^j P^(j)(a) Q^(n-j)(a), independent of a.

    Exact for a rational evaluation point; a certified enclosure at
    precision ``prec`` otherwise (useful only to exercise the
    point-independence, since a = 0 always gives the exact value).
    """
    if p.degree > n or q.degree > n:
        raise DegreeOverflow(f"pairing needs both degrees <= {n}")
    a = as_real(at)
    p_derivs = [p]
    q_derivs = [q]
    for _ in range(n):
        p_derivs.append(p_derivs[-1].derivative())
        q_derivs.append(q_derivs[-1].derivative())
    if a.is_rational():
        x = a.as_fraction()
        total = Fraction(0)
        for j in range(n + 1):
            term = p_derivs[j](x) * q_derivs[n - j](x)
            total += -term if j % 2 else term
        return total
    x = a.enclosure(prec)
    total = Iv.point(Fraction(0))
    for j in range(n + 1):
        term = p_derivs[j](x) * q_derivs[n - j](x)
        total = total + (-term if j % 2 else term)
    return total


@dataclass(frozen=True)
class PairingBoundReport:
    """Adelic size of one pairing value against (n+1)! max X_j Y_{n-j}."""

    value: Fraction
    bound: Fraction
    vacuous: bool  # value == 0: nothing to bound

    @property
    def holds(self) -> bool:
        return self.vacuous or self.bound >= 1

    def to_json_dict(self) -> dict:
        return {
            "value": rational_str(self.value),
            "bound": rational_str(self.bound),
            "vacuous": self.vacuous,
            "holds": self.holds,
        }


def pairing_bound_check(
    p: RatPoly, q: RatPoly, body_p: BodySpec, body_q: BodySpec
) -> PairingBoundReport:
    """Verify prod_v |g(P,Q)|_v <= (n+1)! max_j X_j Y_{n-j}.

    P and Q must be integer members of their bodies (checked).  For a
    nonzero rational pairing value the adelic product is exactly 1 by
    the product formula, so the verified inequality reads
    1 <= (n+1)! max_j X_j Y_{n-j}; a zero value is reported as vacuous.
    """
    n = body_p.n
    if body_q.n != n:
        raise PreconditionFailed("both bodies must share the same degree cap")
    if not membership(p, body_p):
        raise PreconditionFailed("P is not a member of its declared body")
    if not membership(q, body_q):
        raise PreconditionFailed("Q is not a member of its declared body")
    value = bilinear_pairing(p, q, n, at=0)
    bound = Fraction(factorial(n + 1)) * max(
        body_p.X[j] * body_q.X[n - j] for j in range(n + 1)
    )
    report = PairingBoundReport(value, bound, value == 0)
    if not report.holds:
        raise TheoremViolation(
            f"pairing bound fails: nonzero g with (n+1)! max X_j Y_(n-j) = {bound} < 1"
        )
    return report


# --- Hankel state ------------------------------------------------------------


@dataclass(frozen=True)
class HankelState:
    """Immutable rank profile of one polynomial Q at one point xi.

    ``y[i] = (-1)^i i! Q^(n-i)(0)`` drives the exact matrices
    M_l[i][j] = y[i+j]; ``z_polys[i]`` is the same expression left as a
    polynomial, so evaluations at xi (the N_l side) can be reproduced
    at any precision.  ``ranks[l] = rank(M_l)``, fraction-free.
    """

    n: int
    q_poly: RatPoly
    xi: RealNumber
    y: tuple[Fraction, ...]
    ranks: tuple[int, ...]
    z_polys: tuple[RatPoly, ...]
    z_exact: Optional[tuple[Fraction, ...]]  # z at xi when xi is rational

    def M(self, l: int) -> tuple[tuple[Fraction, ...], ...]:
        self._check_level(l)
        return tuple(
            tuple(self.y[i + j] for j in range(self.n - l + 1)) for i in range(l + 1)
        )

    def N_exact(self, l: int) -> tuple[tuple[Fraction, ...], ...]:
        self._check_level(l)
        if self.z_exact is None:
            raise PreconditionFailed("exact N needs rational xi")
        return tuple(
            tuple(self.z_exact[i + j] for j in range(self.n - l + 1))
            for i in range(l + 1)
        )

    def N_enclosure(self, l: int, prec: int = 64) -> tuple[tuple[Iv, ...], ...]:
        self._check_level(l)
        x = self.xi.enclosure(prec)
        z = [poly(x) for poly in self.z_polys]
        z = [v if isinstance(v, Iv) else Iv.point(v) for v in z]
        return tuple(
            tuple(z[i + j] for j in range(self.n - l + 1)) for i in range(l + 1)
        )

    def rank(self, l: int) -> int:
        self._check_level(l)
        return self.ranks[l]

    def _check_level(self, l: int) -> None:
        if not 0 <= l <= self.n:
            raise PreconditionFailed(f"level must satisfy 0 <= l <= {self.n}")

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "q": [rational_str(c) for c in self.q_poly.coeffs],
            "y": [rational_str(v) for v in self.y],
            "ranks": list(self.ranks),
        }


def _poly_entry(c: Fraction) -> RatPoly:
    return RatPoly((c,)) if c else RatPoly.zero()


def _poly_mat_mul(a, b):
    rows = len(a)
    inner = len(b)
    cols = len(b[0])
    out = []
    for i in range(rows):
        out.append(
            [
                sum((a[i][t] * b[t][j] for t in range(inner)), RatPoly.zero())
                for j in range(cols)
            ]
        )
    return out


def _formal_shift_congruence(state: HankelState, l: int) -> bool:
    """Verify M_l * C(s) == W(s) * N_l(s) as polynomial matrices.

    C and W are the unitriangular binomial change-of-basis matrices
    between the monomial and shifted-power bases, with the shift left
    formal.  The identity holding for every s proves rank(N_l at xi) =
    rank(M_l) for the actual xi without any numerical zero test.
    """
    n = state.n
    m_poly = [[_poly_entry(v) for v in row] for row in state.M(l)]
    width = n - l + 1
    c_mat = [
        [
            RatPoly.monomial(j - i, Fraction(comb(j, i) * (-1) ** (j - i)))
            if j >= i
            else RatPoly.zero()
            for j in range(width)
        ]
        for i in range(width)
    ]
    w_mat = [
        [
            RatPoly.monomial(m - mp, Fraction(comb(m, mp)))
            if m >= mp
            else RatPoly.zero()
            for mp in range(l + 1)
        ]
        for m in range(l + 1)
    ]
    n_poly = [
        [state.z_polys[i + j] for j in range(width)] for i in range(l + 1)
    ]
    lhs = _poly_mat_mul(m_poly, c_mat)
    rhs = _poly_mat_mul(w_mat, n_poly)
    return all(
        lhs[i][j] == rhs[i][j] for i in range(l + 1) for j in range(width)
    )


def build_state(q: RatPoly, xi, n: int) -> HankelState:
    """Assemble the Hankel profile of Q and verify its invariants.

    Checks at construction: the transpose symmetry M_{n-l} = M_l^t, and
    rank(N_l) = rank(M_l) for every l — exactly when xi is rational,
    through the formal change-of-basis congruence otherwise.
    """
    if q.is_zero():
        raise ZeroPolynomial("Hankel state of the zero polynomial")
    if q.degree > n:
        raise DegreeOverflow(f"need deg Q <= {n}")
    if not q.is_integer():
        raise NonIntegerCoefficients("Hankel states are built from integer Q")
    xi = as_real(xi)
    z_polys = []
    for i in range(n + 1):
        base = q.derivative(n - i) * Fraction(factorial(i))
        z_polys.append(-base if i % 2 else base)
    y = tuple(poly(Fraction(0)) for poly in z_polys)

    ranks = []
    matrices = []
    for l in range(n + 1):
        rows = tuple(
            tuple(y[i + j] for j in range(n - l + 1)) for i in range(l + 1)
        )
        matrices.append(rows)
        ranks.append(_linalg.rank(rows))
    for l in range(n + 1):
        transpose = tuple(zip(*matrices[l]))
        if transpose != matrices[n - l]:
            raise TheoremViolation("transpose symmetry M_(n-l) = M_l^t failed")

    z_exact: Optional[tuple[Fraction, ...]] = None
    if xi.is_rational():
        x = xi.as_fraction()
        z_exact = tuple(poly(x) for poly in z_polys)
    state = HankelState(
        n=n,
        q_poly=q,
        xi=xi,
        y=y,
        ranks=tuple(ranks),
        z_polys=tuple(z_polys),
        z_exact=z_exact,
    )
    for l in range(n + 1):
        if not _formal_shift_congruence(state, l):
            raise TheoremViolation(f"change-of-basis congruence failed at level {l}")
    if z_exact is not None:
        # second route: the congruence already proves the rank equality,
        # and an exact rank of the evaluated matrix must agree
        for l in range(n + 1):
            if _linalg.rank(state.N_exact(l)) != ranks[l]:
                raise TheoremViolation(f"rank(N_{l}) != rank(M_{l}) at rational xi")
    return state


# --- kernels -----------------------------------------------------------------


@dataclass(frozen=True)
class KernelSpace:
    """The space of degree <= n-l polynomials G with g(T^m G, Q) = 0
    for m = 0..l, as primitive integer coefficient vectors."""

    level: int
    ambient: int  # n - l + 1
    vectors: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def polynomials(self) -> tuple[RatPoly, ...]:
        return tuple(RatPoly(tuple(Fraction(c) for c in v)) for v in self.vectors)

    def contains(self, p: RatPoly) -> bool:
        if p.degree >= self.ambient:
            return False
        if p.is_zero():
            return True
        rows = list(self.vectors) + [p.vector(self.ambient - 1)]
        return _linalg.rank(rows) == self.dim

    def to_json_dict(self) -> dict:
        return {
            "level": self.level,
            "dim": self.dim,
            "vectors": [[int(c) for c in v] for v in self.vectors],
        }


def kernel_space(state: HankelState, l: int) -> KernelSpace:
    """Exact kernel of M_l, with the dimension formula asserted.

    When M_l has full row rank l+1 the kernel and row space are dual,
    and the height identity H(V_l) = H(M_l) is asserted through both
    routes of the heights module.
    """
    rows = state.M(l)
    basis = _linalg.kernel_basis(rows, state.n - l + 1)
    space = KernelSpace(
        level=l,
        ambient=state.n - l + 1,
        vectors=tuple(tuple(int(c) for c in v) for v in basis),
    )
    expected = state.n - l + 1 - state.rank(l)
    if space.dim != expected:
        raise TheoremViolation(
            f"dim V_{l} = {space.dim} but n-l+1-rank = {expected}"
        )
    if state.rank(l) == l + 1:
        h_matrix = height_matrix(rows).value
        if space.dim == 0:
            h_space = height_subspace(SubspaceRep.from_kernel(rows)).value
        else:
            h_space = height_subspace(
                SubspaceRep.from_both(basis=space.vectors, kernel=rows)
            ).value
        if h_space != h_matrix:
            raise TheoremViolation(
                f"H(V_{l}) = {h_space} differs from H(M_{l}) = {h_matrix}"
            )
    return space


def _canonical_kernel_poly(vectors: Sequence[Sequence[Fraction]]) -> RatPoly:
    """Deterministic nonzero pick: first reduced basis vector, sign fixed."""
    vec = list(vectors[0])
    lead = next(c for c in reversed(vec) if c)
    if lead < 0:
        vec = [-c for c in vec]
    return RatPoly(tuple(Fraction(c) for c in vec))


def rank_drop_extract(state: HankelState, k: int) -> tuple[int, RatPoly]:
    """Least h <= k with rank(M_h) <= h, and a generator of the drop.

    Returns a primitive integer P != 0 of degree <= h spanning (with
    its shifts) the full kernel V_{h-1}; both the subspace identity
    P * E_{n-2h+1} = V_{h-1} and divisibility of every kernel basis
    element by P are asserted exactly.  Raises NoRankDrop when every
    M_l with l <= k has full row rank.
    """
    n = state.n
    if not 1 <= k <= n // 2:
        raise PreconditionFailed(f"need 1 <= k <= n/2 = {n / 2}")
    h = None
    for l in range(1, k + 1):
        if state.rank(l) <= l:
            h = l
            break
    if h is None:
        raise NoRankDrop(f"all M_l up to l = {k} have full row rank")
    if state.rank(h - 1) != h:
        raise TheoremViolation("minimal drop index has rank(M_(h-1)) != h")

    basis = _linalg.kernel_basis(state.M(n - h), h + 1)
    if not basis:
        raise TheoremViolation("transpose rank argument left an empty kernel")
    p = _canonical_kernel_poly(basis)

    # subspace identity P * E_{n-2h+1} = V_{h-1}, both inclusions at once
    width = n - h + 2
    shift_rows = [
        tuple((p * RatPoly.monomial(j)).vector(width - 1))
        for j in range(n - 2 * h + 2)
    ]
    v_basis = _linalg.kernel_basis(state.M(h - 1), width)
    if not _linalg.row_space_equal(shift_rows, v_basis):
        raise TheoremViolation("P * E_(n-2h+1) differs from V_(h-1)")
    for vec in v_basis:
        element = RatPoly(tuple(Fraction(c) for c in vec))
        if not p.divides(element):
            raise TheoremViolation("extracted P misses a kernel element")
    return h, p


# --- certified matrix norms --------------------------------------------------


def _iv_det(rows: Sequence[Sequence[Iv]]) -> Iv:
    size = len(rows)
    total = Iv.point(Fraction(0))
    for perm in itertools.permutations(range(size)):
        sign = 1
        seen = list(perm)
        for i in range(size):
            for j in range(i + 1, size):
                if seen[i] > seen[j]:
                    sign = -sign
        term = Iv.point(Fraction(sign))
        for i in range(size):
            term = term * rows[i][perm[i]]
        total = total + term
    return total


def _minor_sup_exact(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    r = len(rows)
    best = Fraction(0)
    for cols in itertools.combinations(range(len(rows[0])), r):
        sub = [[row[c] for c in cols] for row in rows]
        best = max(best, abs(_linalg.det(sub)))
    return best


def _minor_sup_iv(rows: Sequence[Sequence[Iv]]) -> Iv:
    r = len(rows)
    best = Iv.point(Fraction(0))
    for cols in itertools.combinations(range(len(rows[0])), r):
        sub = [[row[c] for c in cols] for row in rows]
        best = iv_max(best, abs(_iv_det(sub)))
    return best


def _beta_bound(xi: RealNumber) -> Fraction:
    """A rational upper bound for max(1, |xi|)."""
    if xi.is_rational():
        return max(Fraction(1), abs(xi.as_fraction()))
    box = xi.enclosure(64)
    return max(Fraction(1), abs(box.lo), abs(box.hi))


def _c5(n: int, l: int) -> Fraction:
    return Fraction(factorial(l + 1) * factorial(n) ** (l + 1))


def _c7(n: int, l: int, beta: Fraction) -> Fraction:
    per_entry = Fraction(2**n) * beta**n
    return comb(n - l + 1, l + 1) * factorial(l + 1) * per_entry ** (l + 1)


def _ratio_step_constant(n: int, beta: Fraction) -> Fraction:
    return Fraction(n * 2 ** (n + 1)) * beta**n


# --- ratio bound -------------------------------------------------------------


@dataclass(frozen=True)
class RatioBoundReport:
    level: int
    power: int  # t
    constant: Fraction
    lhs: Scalar  # (|P(xi)| / ||P||)^t
    rhs: Scalar  # constant * X_(n-t-l)...X_(n-t) / ||N_l||
    norm_n: Scalar

    def to_json_dict(self) -> dict:
        return {
            "level": self.level,
            "power": self.power,
            "constant": rational_str(self.constant),
            "lhs": _scalar_json(self.lhs),
            "rhs": _scalar_json(self.rhs),
            "norm_n": _scalar_json(self.norm_n),
        }


def _nondecreasing_scales(X: Sequence, n: int) -> tuple[Fraction, ...]:
    X = tuple(Fraction(x) for x in X)
    if len(X) != n + 1:
        raise PreconditionFailed("X must list n+1 bounds")
    for j in range(n):
        if X[j] > X[j + 1]:
            raise PreconditionFailed("scale tuple must be non-decreasing")
    return X


def _shift_vectors_in_kernel(state: HankelState, l: int, p: RatPoly, t: int) -> bool:
    width = state.n - l + 1
    if p.degree + t - 1 > state.n - l:
        return False
    rows = state.M(l)
    for j in range(t):
        vec = (p * RatPoly.monomial(j)).vector(width - 1)
        for row in rows:
            if sum(a * b for a, b in zip(row, vec)) != 0:
                return False
    return True


def ratio_bound_check(
    state: HankelState, l: int, t: int, p: RatPoly, X: Sequence
) -> RatioBoundReport:
    """Certify (|P(xi)|/||P||)^t <= C * X_(n-t-l)...X_(n-t) / ||N_l||.

    ||N_l|| is the maximal-minor sup norm.  The effective constant is
    C = (n 2^(n+1) beta^n)^t (l+1)! (n!)^(l+1) with beta a rational
    upper bound for max(1, |xi|); the inequality is a theorem under the
    preconditions, so a certified failure raises TheoremViolation.
    """
    n = state.n
    if p.is_zero():
        raise ZeroPolynomial("ratio bound needs P != 0")
    if not (0 <= l < Fraction(n, 2)):
        raise PreconditionFailed("need 0 <= l < n/2")
    if not 1 <= t <= n - 2 * l:
        raise PreconditionFailed("need 1 <= t <= n - 2l")
    if state.rank(l) != l + 1:
        raise PreconditionFailed("N_l must have full row rank l+1")
    if not _shift_vectors_in_kernel(state, l, p, t):
        raise PreconditionFailed("P * E_(t-1) is not contained in V_l")
    X = _nondecreasing_scales(X, n)
    if not membership(state.q_poly, BodySpec.make(n, state.xi, X)):
        raise PreconditionFailed("Q does not lie in the declared body")

    beta = _beta_bound(state.xi)
    constant = _ratio_step_constant(n, beta) ** t * _c5(n, l)
    x_product = Fraction(1)
    for j in range(n - t - l, n - t + 1):
        x_product *= X[j]
    p_norm = p.max_norm()

    if state.z_exact is not None:
        norm_n = _minor_sup_exact(state.N_exact(l))
        if norm_n == 0:
            raise TheoremViolation("full-rank N_l has zero minor norm")
        lhs = (abs(p(state.xi.as_fraction())) / p_norm) ** t
        rhs = constant * x_product / norm_n
        if lhs > rhs:
            raise TheoremViolation(f"ratio bound fails: {lhs} > {rhs}")
        return RatioBoundReport(l, t, constant, lhs, rhs, norm_n)

    prec = 64
    cap = 4 * precision_cap()
    while True:
        norm_n = _minor_sup_iv(state.N_enclosure(l, prec))
        if norm_n.lo > 0:
            lhs = (abs(p(state.xi.enclosure(prec))) * (1 / p_norm)).pow_int(t)
            rhs = Iv.point(constant * x_product) / norm_n
            if lhs.hi <= rhs.lo:
                return RatioBoundReport(l, t, constant, lhs, rhs, norm_n)
            if lhs.lo > rhs.hi:
                raise TheoremViolation("ratio bound certified to fail")
        if prec > cap:
            raise UndecidableTie("ratio bound undecided at the precision cap")
        prec *= 2


# --- the divisor pipeline ----------------------------------------------------


@dataclass(frozen=True)
class FactorSplit:
    """Outcome of the irreducible-factor selection step."""

    applied: bool
    reason: Optional[str]
    factors: tuple[RatPoly, ...] = ()
    rho: tuple[Scalar, ...] = ()
    selected_index: Optional[int] = None
    c9_exponent: int = 0  # rho_selected <= max(1, e^exponent * c8)
    divides_kernel: bool = False

    @property
    def selected(self) -> Optional[RatPoly]:
        if self.selected_index is None:
            return None
        return self.factors[self.selected_index]

    def to_json_dict(self) -> dict:
        return {
            "applied": self.applied,
            "reason": self.reason,
            "factors": [[rational_str(c) for c in f.coeffs] for f in self.factors],
            "rho": [_scalar_json(r) for r in self.rho],
            "selected_index": self.selected_index,
            "c9_exponent": self.c9_exponent,
            "divides_kernel": self.divides_kernel,
        }


@dataclass(frozen=True)
class DivisorReport:
    n: int
    k: int
    t: int
    delta: Fraction
    growth: Fraction  # Y = X_(n-t+1) ... X_n
    premise_lhs: Fraction  # Y * delta^(k+1-t)
    premise_rhs: Fraction  # (c5 c7)^(-1) at level k
    premise_holds: bool
    ranks: tuple[int, ...]
    drop_index: int  # h
    divisor: RatPoly  # P
    divisor_height: Fraction
    kernel_height: Fraction  # H(V_(h-1)) = H(M_(h-1))
    bridge_constant: Fraction  # c with H(P)^(n+2-2h) <= c H(V_(h-1))
    height_constant_float: float  # C with H(P) <= C delta^(-k/n)
    ratio: RatioBoundReport
    decay_constant: Fraction  # c8 in (|P|/||P||)^t <= c8 delta^h H(P)^(2h-n-2)
    decay_lhs: Scalar
    decay_rhs: Fraction
    split: FactorSplit

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "t": self.t,
            "delta": rational_str(self.delta),
            "growth": rational_str(self.growth),
            "premise_lhs": rational_str(self.premise_lhs),
            "premise_rhs": rational_str(self.premise_rhs),
            "premise_holds": self.premise_holds,
            "ranks": list(self.ranks),
            "drop_index": self.drop_index,
            "divisor": [rational_str(c) for c in self.divisor.coeffs],
            "divisor_height": rational_str(self.divisor_height),
            "kernel_height": rational_str(self.kernel_height),
            "bridge_constant": rational_str(self.bridge_constant),
            "height_constant_float": self.height_constant_float,
            "ratio": self.ratio.to_json_dict(),
            "decay_constant": rational_str(self.decay_constant),
            "decay_lhs": _scalar_json(self.decay_lhs),
            "decay_rhs": rational_str(self.decay_rhs),
            "split": self.split.to_json_dict(),
        }


def _ratio_power(state: HankelState, p: RatPoly, t: int, prec: int = 64) -> Scalar:
    norm = p.max_norm()
    if state.xi.is_rational():
        return (abs(p(state.xi.as_fraction())) / norm) ** t
    return (abs(p(state.xi.enclosure(prec))) * (1 / norm)).pow_int(t)


def _verify_scalar_le(
    lhs_fn: Callable[[int], Scalar], rhs: Fraction, what: str
) -> Scalar:
    """Hard-assert lhs <= rhs where lhs may need refinement."""
    prec = 64
    cap = 4 * precision_cap()
    while True:
        lhs = lhs_fn(prec)
        if isinstance(lhs, Fraction):
            if lhs > rhs:
                raise TheoremViolation(f"{what}: {lhs} > {rhs}")
            return lhs
        if lhs.hi <= rhs:
            return lhs
        if lhs.lo > rhs:
            raise TheoremViolation(f"{what} certified to fail")
        if prec > cap:
            raise UndecidableTie(f"{what} undecided at the precision cap")
        prec *= 2


@dataclass(frozen=True)
class _RhoEntry:
    """One selection value: exact rational, or refinable enclosure."""

    exact: Optional[Fraction]
    fn: Optional[Callable[[int], Iv]]

    def snapshot(self, prec: int = 64) -> Scalar:
        return self.exact if self.exact is not None else self.fn(prec)

    def box(self, prec: int) -> Iv:
        if self.exact is not None:
            return Iv.point(self.exact)
        return self.fn(prec)


def _rho_entry(state: HankelState, poly: RatPoly, t: int, weight: Fraction) -> _RhoEntry:
    if state.xi.is_rational():
        base = (abs(poly(state.xi.as_fraction())) / poly.max_norm()) ** t
        return _RhoEntry(base * weight, None)
    if isinstance(state.xi, AlgebraicReal) and poly == state.xi.min_poly():
        return _RhoEntry(Fraction(0), None)  # the one factor vanishing at xi
    norm = poly.max_norm()

    def fn(prec: int) -> Iv:
        box = abs(poly(state.xi.enclosure(prec))) * (1 / norm)
        return box.pow_int(t) * weight

    return _RhoEntry(None, fn)


def _entry_less(a: _RhoEntry, b: _RhoEntry) -> bool:
    """Certified strict a < b; equality reports False.

    Exact entries decide immediately.  At most one entry per selection
    is an exact zero (only the minimal polynomial of an algebraic xi
    vanishes there), so refinement separates every mixed pair; a pair
    of enclosures with genuinely equal values stays inseparable and
    surfaces as UndecidableTie at the precision cap.
    """
    if a.exact is not None and b.exact is not None:
        return a.exact < b.exact
    prec = 64
    cap = 4 * precision_cap()
    while True:
        va = a.box(prec)
        vb = b.box(prec)
        if va.hi < vb.lo:
            return True
        if va.lo >= vb.hi:
            return False
        if prec > cap:
            raise UndecidableTie("selection values did not separate")
        prec *= 2


def _certified_argmin(entries: Sequence[_RhoEntry]) -> int:
    best = 0
    for i in range(1, len(entries)):
        if _entry_less(entries[i], entries[best]):
            best = i
    return best


def _rho_leq_c9(entry: _RhoEntry, c8: Fraction, n: int) -> None:
    """Hard-assert rho <= max(1, e^(n^2) c8)."""
    exponent = n * n
    if entry.exact is not None:
        if entry.exact <= 1:
            return
        # equality with e^(n^2) c8 is impossible for a rational value
        if not _lt_exp_times(entry.exact, exponent, c8):
            raise TheoremViolation("selected factor exceeds the split constant")
        return
    prec = 64
    cap = 4 * precision_cap()
    while True:
        rho = entry.fn(prec)
        if rho.hi <= 1:
            return
        gate = exp_iv(exponent, prec) * c8
        if rho.hi <= gate.lo:
            return
        if rho.lo > gate.hi and rho.lo > 1:
            raise TheoremViolation("selected factor exceeds the split constant")
        if prec > cap:
            raise UndecidableTie("split constant comparison did not resolve")
        prec *= 2


def construct_divisor(
    body: BodySpec, q: RatPoly, k: int, t: int
) -> tuple[int, RatPoly, DivisorReport]:
    """Full divisor pipeline on a split scale tuple.

    The body must have X_0 <= ... <= X_(n-t) < 1 <= X_(n-t+1) <= ... <= X_n
    and contain the integer polynomial Q.  Detects the first Hankel
    rank drop h <= k, extracts the common divisor P of V_(h-1), and
    hard-asserts the effective height and decay inequalities; the
    irreducible-factor split is then applied when the scale allows it.
    Raises DidNotDrop (diagnostic) when no drop exists and the
    effective smallness premise did not force one.

    The kernel-height bridge constant comes from the minor/monomial
    change of basis, which caps the workable sizes at n - h + 2 <= 8.
    """
    n = body.n
    if not 1 <= k <= n // 2:
        raise PreconditionFailed(f"need 1 <= k <= n/2 = {n / 2}")
    if not 1 <= t <= n + 2 - 2 * k:
        raise PreconditionFailed("need 1 <= t <= n + 2 - 2k")
    X = _nondecreasing_scales(body.X, n)
    if not (X[n - t] < 1 <= X[n - t + 1]):
        raise PreconditionFailed("scale tuple must split at index n - t")
    if not membership(q, body):
        raise PreconditionFailed("Q does not lie in the declared body")

    state = build_state(q, body.xi, n)
    delta = X[n - t]
    growth = Fraction(1)
    for j in range(n - t + 1, n + 1):
        growth *= X[j]
    beta = _beta_bound(state.xi)
    premise_rhs = 1 / (_c5(n, k) * _c7(n, k, beta))
    premise_lhs = growth * delta ** (k + 1 - t)
    premise_holds = premise_lhs < premise_rhs

    try:
        h, p = rank_drop_extract(state, k)
    except NoRankDrop:
        if premise_holds:
            raise TheoremViolation(
                "effective smallness premise holds but M_k kept full rank"
            )
        raise DidNotDrop(
            "no Hankel rank drop; the effective premise was not satisfied"
        )

    power = n + 2 - 2 * h
    h_p = height_polynomial(p).value
    m_rows = state.M(h - 1)
    h_matrix = height_matrix(m_rows).value
    v_basis = _linalg.kernel_basis(m_rows, n - h + 2)
    h_kernel = height_subspace(
        SubspaceRep.from_both(basis=v_basis, kernel=m_rows)
    ).value
    if h_kernel != h_matrix:
        raise TheoremViolation("H(V_(h-1)) != H(M_(h-1))")
    bridge = product_height_lower_constant(n - 2 * h + 2, p.degree)
    if h_p**power > bridge * h_kernel:
        raise TheoremViolation("divisor height exceeds the kernel-height bridge")
    if (h_p**n * delta**k) ** power > bridge**n:
        raise TheoremViolation("divisor height exceeds the delta^(-k/n) bound")
    height_constant = float(bridge) ** (1.0 / power)

    ratio_report = ratio_bound_check(state, h - 1, t, p, X)
    c8 = ratio_report.constant * _c7(n, h - 1, beta) * bridge
    decay_rhs = c8 * delta**h / h_p**power
    decay_lhs = _verify_scalar_le(
        lambda prec: _ratio_power(state, p, t, prec), decay_rhs, "decay inequality"
    )

    split = _factor_split(state, p, k, t, delta, c8)
    report = DivisorReport(
        n=n,
        k=k,
        t=t,
        delta=delta,
        growth=growth,
        premise_lhs=premise_lhs,
        premise_rhs=premise_rhs,
        premise_holds=premise_holds,
        ranks=state.ranks,
        drop_index=h,
        divisor=p,
        divisor_height=h_p,
        kernel_height=h_kernel,
        bridge_constant=bridge,
        height_constant_float=height_constant,
        ratio=ratio_report,
        decay_constant=c8,
        decay_lhs=decay_lhs,
        decay_rhs=decay_rhs,
        split=split,
    )
    return h, p, report


def _factor_split(
    state: HankelState, p: RatPoly, k: int, t: int, delta: Fraction, c8: Fraction
) -> FactorSplit:
    n = state.n
    if delta * c8 >= 1:
        return FactorSplit(False, "delta >= 1/c8: split constant too weak")
    if p.degree == 0:
        # impossible alongside the decay inequality at this scale, and
        # that contradiction surfaces earlier as TheoremViolation
        return FactorSplit(False, "constant divisor: nothing to split")
    _, factor_list = factor_over_rationals(p)
    factors = []
    for poly, mult in factor_list:
        factors.extend([poly] * mult)
    power = n + 2 - 2 * k
    entries = []
    for poly in factors:
        h_f = height_polynomial(poly).value
        weight = h_f**power / delta**poly.degree
        entries.append(_rho_entry(state, poly, t, weight))
    idx = _certified_argmin(entries)
    _rho_leq_c9(entries[idx], c8, n)
    selected = factors[idx]
    kernel_polys = kernel_space(state, k - 1).polynomials()
    if not all(selected.divides(g) for g in kernel_polys):
        raise TheoremViolation("selected irreducible misses an element of V_(k-1)")
    return FactorSplit(
        applied=True,
        reason=None,
        factors=tuple(factors),
        rho=tuple(e.snapshot() for e in entries),
        selected_index=idx,
        c9_exponent=n * n,
        divides_kernel=True,
    )


# --- dual box inclusion ------------------------------------------------------


def _dual_body(state: HankelState, l: int, X: Sequence[Fraction]) -> BodySpec:
    n = state.n
    c = Fraction(1, factorial(n + 1) ** 2)
    bounds = tuple(c / X[n - j] for j in range(n - l + 1))
    return BodySpec.make(n - l, state.xi, bounds)


def dual_inclusion_check(
    state: HankelState,
    l: int,
    X: Sequence,
    samples: Optional[int] = None,
    rng: Optional[random.Random] = None,
) -> bool:
    """Every integer member of the scaled dual box lies in V_l.

    Enumerates (samples = None) or samples integer polynomials G of
    degree <= n-l in the body with bounds ((n+1)!)^-2 / X_(n-j) and
    verifies g(T^m G, Q) = 0 exactly for m = 0..l.  A nonzero pairing
    would falsify the implementation, not the theorem, and raises
    CounterexampleFound with the witness attached.
    """
    n = state.n
    state._check_level(l)
    X = _nondecreasing_scales(X, n)
    if not membership(state.q_poly, BodySpec.make(n, state.xi, X)):
        raise PreconditionFailed("Q does not lie in the declared body")
    dual = _dual_body(state, l, X)

    if samples is None:
        candidates = _enumerate_members(dual)
    else:
        candidates = _sample_members(dual, samples, rng or random.Random(0))

    for g_poly in candidates:
        for m in range(l + 1):
            value = bilinear_pairing(g_poly * RatPoly.monomial(m), state.q_poly, n)
            if value != 0:
                exc = CounterexampleFound(
                    f"dual member pairs to {value} != 0 against Q at shift {m}"
                )
                exc.witness = (g_poly, m)
                raise exc
    return True


def _enumerate_members(body: BodySpec):
    out = []
    for coeffs in _enumerate_box(body, Fraction(1)):
        p = RatPoly(tuple(Fraction(c) for c in coeffs))
        if membership(p, body):
            out.append(p)
    return out


def _sample_members(body: BodySpec, count: int, rng: random.Random):
    n = body.n
    beta = _beta_bound(body.xi)
    boxes = []
    for i in range(n + 1):
        bound = Fraction(0)
        for j in range(i, n + 1):
            bound += comb(j, i) * beta ** (j - i) * body.X[j] / factorial(j)
        boxes.append(int(bound) + 1)
    found = []
    attempts = 0
    while len(found) < count and attempts < 200 * max(count, 1):
        attempts += 1
        coeffs = tuple(Fraction(rng.randint(-b, b)) for b in boxes)
        p = RatPoly(coeffs)
        if p.is_zero():
            continue
        if membership(p, body):
            found.append(p)
    return found


# --- auxiliary polynomial ----------------------------------------------------


@dataclass(frozen=True)
class AuxiliaryReport:
    level: int
    order: int  # u: derivatives 0..u land in V_level
    premise_lhs: Fraction  # X_n^(u+1) X_(n-1) ... X_(l+u)
    premise_rhs: Fraction  # effective volume threshold
    premise_holds: bool
    height: Fraction
    target: Fraction  # X_(l+u)^(-1)
    height_vs_target: Fraction  # H(G) * X_(l+u)

    def to_json_dict(self) -> dict:
        return {
            "level": self.level,
            "order": self.order,
            "premise_lhs": rational_str(self.premise_lhs),
            "premise_rhs": rational_str(self.premise_rhs),
            "premise_holds": self.premise_holds,
            "height": rational_str(self.height),
            "target": rational_str(self.target),
            "height_vs_target": rational_str(self.height_vs_target),
        }


def auxiliary_polynomial(
    state: HankelState, l: int, u: int, X: Sequence
) -> tuple[RatPoly, AuxiliaryReport]:
    """Search the dual box for G != 0 with G, G', ..., G^(u) all in V_l.

    The box bounds reuse the dual tuple of the inclusion lemma shrunk
    by 1/n!; Minkowski's first-minimum criterion turns the premise
    X_n^(u+1) X_(n-1)...X_(l+u) <= threshold into a guaranteed hit, so
    an exhausted search under a satisfied premise is a hard failure,
    and SearchExhausted otherwise.  Membership of every derivative in
    the kernel is asserted exactly, never numerically.
    """
    n = state.n
    if l < 0 or u < 0 or l + u >= n:
        raise PreconditionFailed("need l, u >= 0 with l + u < n")
    X = _nondecreasing_scales(X, n)
    if not membership(state.q_poly, BodySpec.make(n, state.xi, X)):
        raise PreconditionFailed("Q does not lie in the declared body")

    width = n - l  # degree bound for G
    c = Fraction(1, factorial(n + 1) ** 2)
    kappa = Fraction(1, factorial(n))
    bounds = tuple(
        kappa * c / X[n] if i <= u else kappa * c / X[n - i + u]
        for i in range(width + 1)
    )
    premise_lhs = X[n] ** (u + 1)
    for j in range(l + u, n):
        premise_lhs *= X[j]
    threshold = (kappa * c) ** (width + 1)
    for j in range(width + 1):
        threshold /= factorial(j)
    premise_holds = premise_lhs <= threshold

    search_body = BodySpec.make(width, state.xi, bounds)
    # the premise is algebra for "the box volume reaches 2^(width+1)";
    # recompute that through the volume criterion as a cross-check
    if premise_holds != first_minimum_condition(search_body, Fraction(1)):
        raise TheoremViolation("volume premise disagrees with the body volume")
    lam, witness = first_minimum_witness(search_body, exhaustive=True)
    if not membership(witness, search_body):
        if premise_holds:
            raise TheoremViolation(
                "volume premise holds but the box has no nonzero integer point"
            )
        raise SearchExhausted("dual box too small at this scale")

    deriv = witness
    m_rows = state.M(l)
    for i in range(u + 1):
        vec = deriv.vector(n - l)
        for row in m_rows:
            if sum(a * b for a, b in zip(row, vec)) != 0:
                raise TheoremViolation(
                    f"derivative {i} of the box witness escapes V_{l}"
                )
        deriv = deriv.derivative()

    height = height_polynomial(witness).value
    report = AuxiliaryReport(
        level=l,
        order=u,
        premise_lhs=premise_lhs,
        premise_rhs=threshold,
        premise_holds=premise_holds,
        height=height,
        target=1 / X[l + u],
        height_vs_target=height * X[l + u],
    )
    return witness, report


@dataclass(frozen=True)
class DivisorPowerReport:
    power: int  # u + 1
    degree_bound: Fraction  # deg(G) / (u+1)
    divisor_degree: int
    divisor_height: Fraction
    quotient: RatPoly

    def to_json_dict(self) -> dict:
        return {
            "power": self.power,
            "degree_bound": rational_str(self.degree_bound),
            "divisor_degree": self.divisor_degree,
            "divisor_height": rational_str(self.divisor_height),
            "quotient": [rational_str(c) for c in self.quotient.coeffs],
        }


def divisor_power_bound(p: RatPoly, g: RatPoly, u: int) -> DivisorPowerReport:
    """From P | G^(i) for i = 0..u conclude P^(u+1) | G, exactly.

    Checks the derivative divisibilities, performs the power division,
    and returns the resulting degree bound deg(P) <= deg(G)/(u+1).
    All failures are hard: the inputs are supposed to come out of
    auxiliary_polynomial against a divisor of the whole kernel.
    """
    if p.is_zero() or g.is_zero():
        raise ZeroPolynomial("divisor power bound needs nonzero polynomials")
    if p.degree == 0:
        raise PreconditionFailed("the divisor must be nonconstant")
    deriv = g
    for i in range(u + 1):
        if not p.divides(deriv):
            raise TheoremViolation(f"P does not divide G^({i})")
        deriv = deriv.derivative()
    quotient = g
    for _ in range(u + 1):
        quotient = quotient // p
    if not (quotient * p ** (u + 1) == g):
        raise TheoremViolation("power division did not reconstruct G")
    bound = Fraction(g.degree, u + 1)
    if p.degree > bound:
        raise TheoremViolation("degree bound deg(P) <= deg(G)/(u+1) fails")
    return DivisorPowerReport(
        power=u + 1,
        degree_bound=bound,
        divisor_degree=p.degree,
        divisor_height=height_polynomial(p).value,
        quotient=quotient,
    )
