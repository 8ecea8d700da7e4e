"""Adelic convex bodies for polynomial approximation at one real place.

A body is the set of real polynomials P of degree <= n with
|P^(j)(xi)| <= X_j for j = 0..n; the lattice is the integer-coefficient
polynomials (the finite-place conditions ||P||_p <= 1 collapse to
integrality over Q).  Volumes are exact rationals, and successive
minima are computed *exactly* for rational xi by complete enumeration
of the lattice points inside a certified bounding scale of the body.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, comb, factorial, floor, gcd
from typing import Optional, Sequence, Union

from . import _linalg
from .errors import (
    DimensionCap,
    NonIntegerCoefficients,
    PreconditionFailed,
    TheoremViolation,
    UndecidableTie,
    ZeroPolynomial,
)
from .exactnum.dyadic import Iv, iv_max, precision_cap
from .exactnum.polynomials import RatPoly, binomial_shift_matrix
from .exactnum.realnumbers import RealNumber, as_real
from .serialize import rational_str

EXHAUSTIVE_DIMENSION_CAP = 6  # largest n for complete enumeration

Scalar = Union[Fraction, Iv]


@dataclass(frozen=True)
class BodySpec:
    """Degree bound n, approximation target xi, and derivative bounds X."""

    n: int
    xi: RealNumber
    X: tuple[Fraction, ...]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("need n >= 0")
        if len(self.X) != self.n + 1:
            raise ValueError(f"need exactly {self.n + 1} bounds, got {len(self.X)}")
        if any(x <= 0 for x in self.X):
            raise ValueError("all X_j must be positive")

    @classmethod
    def make(cls, n: int, xi, X: Sequence) -> "BodySpec":
        return cls(n=n, xi=as_real(xi), X=tuple(Fraction(x) for x in X))

    def rational_xi(self) -> Optional[Fraction]:
        return self.xi.as_fraction() if self.xi.is_rational() else None

    def scaled(self, c) -> "BodySpec":
        c = Fraction(c)
        if c <= 0:
            raise ValueError("scale must be positive")
        return BodySpec(self.n, self.xi, tuple(c * x for x in self.X))


@dataclass(frozen=True)
class MinimaResult:
    """Successive minima with attaining witnesses.

    ``exhaustive`` means the lambdas are the true minima (complete
    lattice enumeration); otherwise they are certified upper bounds
    attained by the witnesses (the witnesses are still independent, so
    lambda_i <= lambdas[i-1] is guaranteed).
    """

    lambdas: tuple[Scalar, ...]
    witnesses: tuple[RatPoly, ...]
    exhaustive: bool

    def to_json_dict(self) -> dict:
        lam = []
        for x in self.lambdas:
            if isinstance(x, Iv):
                lam.append({"lo": rational_str(x.lo), "hi": rational_str(x.hi)})
            else:
                lam.append(rational_str(x))
        return {
            "lambdas": lam,
            "witnesses": [[int(c) for c in w.coeffs] for w in self.witnesses],
            "exhaustive": self.exhaustive,
        }


def _require_integer(p: RatPoly) -> None:
    if not p.is_integer():
        raise NonIntegerCoefficients(f"lattice points have integer coefficients: {p!r}")


def mu_exact(body: BodySpec, p: RatPoly) -> Fraction:
    """max_j |P^(j)(xi)| / X_j for rational xi, exactly."""
    xi = body.rational_xi()
    if xi is None:
        raise PreconditionFailed("mu_exact needs rational xi")
    if p.is_zero():
        raise ZeroPolynomial("mu of the zero polynomial")
    taylor = p.taylor_coefficients(xi, body.n)
    return max(
        abs(c) * factorial(j) / body.X[j] for j, c in enumerate(taylor)
    )


def mu_enclosure(body: BodySpec, p: RatPoly, prec: int = 64) -> Iv:
    """Certified enclosure of max_j |P^(j)(xi)| / X_j."""
    if p.is_zero():
        raise ZeroPolynomial("mu of the zero polynomial")
    xi_iv = body.xi.enclosure(prec)
    out = Iv.point(Fraction(0))
    deriv = p
    for j in range(body.n + 1):
        out = iv_max(out, abs(deriv(xi_iv)) * Fraction(1, 1) / body.X[j])
        deriv = deriv.derivative()
    return out


def membership(p: RatPoly, body: BodySpec, scale: Fraction = Fraction(1)) -> bool:
    """Is P in scale * body?  Exact for rational xi, certified otherwise."""
    _require_integer(p)
    scale = Fraction(scale)
    if p.is_zero():
        return True
    if p.degree > body.n:
        return False
    xi = body.rational_xi()
    if xi is not None:
        return mu_exact(body, p) <= scale
    prec = 32
    cap = 4 * precision_cap()
    while True:
        mu = mu_enclosure(body, p, prec)
        if mu.hi <= scale:
            return True
        if mu.lo > scale:
            return False
        if prec > cap:
            raise UndecidableTie("membership sits on the body boundary")
        prec *= 2


def volume(body: BodySpec) -> Fraction:
    """Exact volume 2^(n+1) * prod X_j / prod j! of the body."""
    num = Fraction(1 << (body.n + 1))
    for j, x in enumerate(body.X):
        num *= x / factorial(j)
    return num


def dual_tuple(X: Sequence) -> tuple[Fraction, ...]:
    """Reversed reciprocals: Y_i = 1 / X_{n-i}."""
    xs = [Fraction(x) for x in X]
    if any(x <= 0 for x in xs):
        raise ValueError("all X_j must be positive")
    return tuple(1 / x for x in reversed(xs))


def first_minimum_condition(body: BodySpec, kappa: Fraction) -> bool:
    """Volume criterion forcing lambda_1 <= kappa: Vol >= (2/kappa)^(n+1)."""
    kappa = Fraction(kappa)
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    return volume(body) >= (2 / kappa) ** (body.n + 1)


# --- successive minima ------------------------------------------------------


def _taylor_transition(n: int, xi: Fraction):
    """Rows k of the map (a_i) -> (P^(k)(xi)/k!): entry C(i,k) xi^(i-k)."""
    return binomial_shift_matrix(n, xi, 1)


def _initial_bound_basis(body: BodySpec, prec: int = 64) -> list[RatPoly]:
    """An independent lattice basis, LLL-reduced for the weighted
    Euclidean proxy of mu, giving a certified upper bound for
    lambda_{n+1}."""
    n = body.n
    xi = body.rational_xi()
    xi_hat = xi if xi is not None else body.xi.enclosure(prec).mid
    rows = _taylor_transition(n, xi_hat)
    weights = [Fraction(factorial(k)) ** 2 / body.X[k] ** 2 for k in range(n + 1)]
    gram = [
        [
            sum(weights[k] * rows[k][i] * rows[k][j] for k in range(n + 1))
            for j in range(n + 1)
        ]
        for i in range(n + 1)
    ]
    basis = _linalg.lll_reduce(gram)
    return [RatPoly([Fraction(c) for c in vec]) for vec in basis]


def _canonical_sign(coeffs: tuple[int, ...]) -> bool:
    # of each +-P pair, keep the one with positive leading coefficient
    for c in reversed(coeffs):
        if c:
            return c > 0
    return False  # the zero vector is never canonical


def _normalized(coeffs: tuple[int, ...]) -> tuple[int, ...]:
    return coeffs if _canonical_sign(coeffs) else tuple(-c for c in coeffs)


def _tie_key(vec: tuple[int, ...]) -> tuple:
    # among equal mu: lowest degree, then smallest |coefficients| from the
    # leading end down, then sign pattern — so 1 beats T beats T-1
    rev = tuple(reversed(vec))
    return (tuple(abs(c) for c in rev), rev)


class _Echelon:
    """Integer row echelon for fast exact span-membership tests."""

    def __init__(self):
        self.rows: list[list[int]] = []  # each with a distinct leading index
        self.leads: list[int] = []

    def _reduce(self, vec) -> list[int]:
        res = list(vec)
        for lead, row in zip(self.leads, self.rows):
            f = res[lead]
            if f:
                p = row[lead]
                res = [p * a - f * b for a, b in zip(res, row)]
        return res

    def contains(self, vec) -> bool:
        return not any(self._reduce(vec))

    def add(self, vec) -> None:
        res = self._reduce(vec)
        lead = next(i for i, x in enumerate(res) if x)
        g = 0
        for x in res:
            g = gcd(g, abs(x))
        self.rows.append([x // g for x in res])
        self.leads.append(lead)


def _stream_minima_rational(body: BodySpec, initial: list[RatPoly]) -> MinimaResult:
    """Exact successive minima for rational xi, greedily one at a time.

    The i-th minimum is the least mu over lattice points outside the
    span of the first i-1 witnesses.  For all but the last minimum this
    is a direct enumeration: the constraints |P^(k)(xi)/k!| <= mu X_k/k!
    are triangular in the coefficients, so with xi = u/v everything
    scales to integers and the walk proceeds center-out under a bound
    that shrinks as better points appear; an integer echelon filters out
    points inside the witness span at the leaves.  The last minimum
    instead splits by the value m of the primitive integer functional
    vanishing on the witness span: on the layer phi.a = m the real
    relaxation of mu has exact minimum m/S (a dual-norm identity), so
    only layers with m/S below the best known value are walked, and
    frequently there are none at all.
    """
    n = body.n
    dim = n + 1
    xi = body.rational_xi()
    u, v = xi.numerator, xi.denominator
    vpow = [v**e for e in range(dim)]
    # irow[k][i] = C(i,k) u^(i-k) v^(n-i):  v^(n-k) P^(k)(xi)/k! = irow[k] . a
    irow = [
        [0] * k + [comb(i, k) * u ** (i - k) * vpow[n - i] for i in range(k, dim)]
        for k in range(dim)
    ]
    # weights k!/(X_k v^(n-k)) over a common denominator: integer ordinals
    wts = [Fraction(factorial(k)) / (body.X[k] * vpow[n - k]) for k in range(dim)]
    denom = 1
    for w in wts:
        denom = denom * w.denominator // gcd(denom, w.denominator)
    W = [w.numerator * (denom // w.denominator) for w in wts]

    def ordinal(vec) -> int:
        return max(
            W[k] * abs(sum(irow[k][i] * vec[i] for i in range(k, dim)))
            for k in range(dim)
        )

    seeds = [
        _normalized(tuple(int(c) for c in p.coeffs) + (0,) * (dim - len(p.coeffs)))
        for p in initial
    ]
    chosen = [0] * dim
    best: list = [0, (), ()]  # running (ordinal, tie key, coeffs) upper bound

    def walk_outside(ech: _Echelon) -> None:
        """Shrink ``best`` to the true minimum outside the echelon span."""

        def descend(k: int, mx: int, neutral: bool):
            irk = irow[k]
            s = 0
            for i in range(k + 1, dim):
                ai = chosen[i]
                if ai:
                    s += irk[i] * ai
            vk = vpow[n - k]
            wk = W[k]
            # walk outward from the |t|-minimizing coefficient so that
            # improving points arrive early and the bound collapses fast
            c = (vk - 2 * s) // (2 * vk)
            if neutral and c < 0:
                c = 0
            t = s + vk * c
            a = c
            while True:
                sk = wk * (t if t >= 0 else -t)
                if sk > best[0]:
                    if t >= 0:
                        break
                else:
                    chosen[k] = a
                    if k:
                        descend(k - 1, mx if mx >= sk else sk, neutral and a == 0)
                    elif not (neutral and a == 0):
                        leaf(mx if mx >= sk else sk)
                a += 1
                t += vk
            a = c - 1
            if not (neutral and a < 0):
                t = s + vk * a
                while True:
                    sk = wk * (t if t >= 0 else -t)
                    if sk > best[0]:
                        if t <= 0:
                            break
                    else:
                        chosen[k] = a
                        if k:
                            descend(k - 1, mx if mx >= sk else sk, neutral and a == 0)
                        else:
                            leaf(mx if mx >= sk else sk)
                    a -= 1
                    if neutral and a < 0:
                        break
                    t -= vk
            chosen[k] = 0

        def leaf(mx: int):
            if mx < best[0] or (mx == best[0] and _tie_key(chosen) < best[1]):
                if not ech.contains(chosen):
                    best[0] = mx
                    best[1] = _tie_key(chosen)
                    best[2] = tuple(chosen)

        descend(n, 0, True)

    def walk_layer(phi, m: int) -> None:
        """Shrink ``best`` over the hyperplane layer phi . a = m > 0."""
        forced = next(i for i in range(dim) if phi[i])

        def leaf(mx: int):
            if mx <= best[0]:
                vec = _normalized(tuple(chosen))
                key = _tie_key(vec)
                if mx < best[0] or key < best[1]:
                    best[0] = mx
                    best[1] = key
                    best[2] = vec

        def descend(k: int, mx: int):
            irk = irow[k]
            s = 0
            for i in range(k + 1, dim):
                ai = chosen[i]
                if ai:
                    s += irk[i] * ai
            vk = vpow[n - k]
            wk = W[k]
            if k == forced:
                rem = m - sum(phi[i] * chosen[i] for i in range(k + 1, dim))
                a, r = divmod(rem, phi[k])
                if r:
                    return
                t = s + vk * a
                sk = wk * (t if t >= 0 else -t)
                if sk <= best[0]:
                    chosen[k] = a
                    if k:
                        descend(k - 1, mx if mx >= sk else sk)
                    else:
                        leaf(mx if mx >= sk else sk)
                chosen[k] = 0
                return
            c = (vk - 2 * s) // (2 * vk)
            t = s + vk * c
            a = c
            while True:
                sk = wk * (t if t >= 0 else -t)
                if sk > best[0]:
                    if t >= 0:
                        break
                else:
                    chosen[k] = a
                    if k:
                        descend(k - 1, mx if mx >= sk else sk)
                    else:
                        leaf(mx if mx >= sk else sk)
                a += 1
                t += vk
            a = c - 1
            t = s + vk * a
            while True:
                sk = wk * (t if t >= 0 else -t)
                if sk > best[0]:
                    if t <= 0:
                        break
                else:
                    chosen[k] = a
                    if k:
                        descend(k - 1, mx if mx >= sk else sk)
                    else:
                        leaf(mx if mx >= sk else sk)
                a -= 1
                t -= vk
            chosen[k] = 0

        descend(n, 0)

    trans = _taylor_transition(n, xi)
    lambdas: list[Fraction] = []
    witnesses: list[tuple] = []
    ech = _Echelon()
    for i in range(dim):
        best[0], best[1], best[2] = min(
            (ordinal(vec), _tie_key(vec), vec)
            for vec in seeds
            if not ech.contains(vec)
        )
        if i < dim - 1:
            walk_outside(ech)
        else:
            # primitive functional vanishing on the witness span
            phi = [int(x) for x in _linalg.kernel_basis(witnesses, dim)[0]]
            # exact real minimum of mu on the layer phi.a = m is m/S
            psi = _linalg.solve_square(
                [[trans[k][i] for k in range(dim)] for i in range(dim)], phi
            )
            s_dual = sum(
                abs(psi[k]) * body.X[k] / factorial(k) for k in range(dim)
            )
            m = 1
            while Fraction(m) / s_dual <= Fraction(best[0], denom):
                walk_layer(phi, m)
                m += 1
        lambdas.append(Fraction(best[0], denom))
        witnesses.append(best[2])
        ech.add(best[2])
    return MinimaResult(
        lambdas=tuple(lambdas),
        witnesses=tuple(RatPoly(c) for c in witnesses),
        exhaustive=True,
    )


def _enumerate_box(body: BodySpec, bound: Fraction, prec: int = 64):
    """All nonzero integer polynomials with certified mu possibly
    <= bound, one per +-P pair, for irrational xi (outer enclosure, so
    the list is a superset of the scaled body)."""
    n = body.n
    xi_iv = body.xi.enclosure(prec)
    targets = [bound * body.X[k] / factorial(k) for k in range(n + 1)]
    # rows[k][i] = C(i,k) xi^(i-k) as intervals
    rows = binomial_shift_matrix(n, xi_iv, 1)

    def descend(k: int, chosen: dict[int, int]):
        if k < 0:
            coeffs = tuple(chosen[i] for i in range(n + 1))
            if _canonical_sign(coeffs):
                yield coeffs
            return
        shift = Iv.point(Fraction(0))
        for i in range(k + 1, n + 1):
            if chosen[i]:
                shift = shift + rows[k][i] * Fraction(chosen[i])
        lo = ceil(-targets[k] - shift.hi)
        hi = floor(targets[k] - shift.lo)
        for a in range(lo, hi + 1):
            chosen[k] = a
            yield from descend(k - 1, chosen)
        chosen.pop(k, None)

    yield from descend(n, {})


class _MuTable:
    """Memoized certified mu enclosures with on-demand refinement."""

    def __init__(self, body: BodySpec, start: int = 64):
        self.body = body
        self.prec: dict[tuple, int] = {}
        self.iv: dict[tuple, Iv] = {}
        self.start = start

    def get(self, coeffs: tuple) -> Iv:
        if coeffs not in self.iv:
            self.prec[coeffs] = self.start
            self.iv[coeffs] = mu_enclosure(self.body, RatPoly(coeffs), self.start)
        return self.iv[coeffs]

    def refine(self, coeffs: tuple) -> Iv:
        self.prec[coeffs] *= 2
        if self.prec[coeffs] > 8 * precision_cap():
            raise UndecidableTie(
                "two candidate polynomials have inseparable mu values"
            )
        self.iv[coeffs] = mu_enclosure(
            self.body, RatPoly(coeffs), self.prec[coeffs]
        )
        return self.iv[coeffs]

    def compare(self, a: tuple, b: tuple) -> int:
        if a == b:
            return 0
        while True:
            ia, ib = self.get(a), self.get(b)
            if ia.hi < ib.lo:
                return -1
            if ib.hi < ia.lo:
                return 1
            self.refine(a)
            self.refine(b)


def successive_minima(
    body: BodySpec, exhaustive: Optional[bool] = None
) -> MinimaResult:
    """Successive minima of the body over the integer-polynomial lattice.

    Exhaustive mode (the default for n <= 6) enumerates every lattice
    point inside a certified scale bound and returns exact minima for
    rational xi.  Non-exhaustive mode returns the certified values of an
    LLL-reduced independent family: honest upper bounds, much faster.
    """
    n = body.n
    if exhaustive is None:
        exhaustive = n <= EXHAUSTIVE_DIMENSION_CAP
    initial = _initial_bound_basis(body)
    xi = body.rational_xi()

    if not exhaustive:
        return _witness_result(body, initial)

    if n > EXHAUSTIVE_DIMENSION_CAP:
        raise DimensionCap(
            f"exhaustive minima capped at n = {EXHAUSTIVE_DIMENSION_CAP}"
        )

    if xi is not None:
        return _stream_minima_rational(body, initial)

    # irrational xi: complete enumeration with certified comparisons
    table = _MuTable(body)
    bound = max(mu_enclosure(body, p).hi for p in initial)
    cands = list(_enumerate_box(body, bound))
    cands.sort(key=functools.cmp_to_key(table.compare))
    lambdas = []
    witnesses = []
    for coeffs in cands:
        if _linalg.rank(witnesses + [coeffs]) == len(witnesses) + 1:
            lambdas.append(table.get(coeffs))
            witnesses.append(coeffs)
            if len(witnesses) == n + 1:
                break
    if len(witnesses) < n + 1:  # pragma: no cover
        raise TheoremViolation("enumeration missed an independent witness")
    return MinimaResult(
        lambdas=tuple(lambdas),
        witnesses=tuple(RatPoly(c) for c in witnesses),
        exhaustive=True,
    )


def _witness_result(body: BodySpec, basis: list[RatPoly]) -> MinimaResult:
    xi = body.rational_xi()
    vecs = [_normalized(tuple(int(c) for c in p.coeffs)) for p in basis]
    if xi is not None:
        scored = sorted(
            (mu_exact(body, RatPoly(v)), _tie_key(v), v) for v in vecs
        )
        return MinimaResult(
            lambdas=tuple(s for s, _, _ in scored),
            witnesses=tuple(RatPoly(c) for _, _, c in scored),
            exhaustive=False,
        )
    scored_iv = sorted(
        ((mu_enclosure(body, RatPoly(v), 96), v) for v in vecs),
        key=lambda t: (t[0].lo, _tie_key(t[1])),
    )
    return MinimaResult(
        lambdas=tuple(s for s, _ in scored_iv),
        witnesses=tuple(RatPoly(c) for _, c in scored_iv),
        exhaustive=False,
    )


def first_minimum_witness(body: BodySpec, exhaustive: bool = False) -> tuple[Scalar, RatPoly]:
    """(lambda_1 bound, witness) — the cheapest useful slice of minima."""
    res = successive_minima(body, exhaustive=exhaustive)
    return res.lambdas[0], res.witnesses[0]


# --- Minkowski and duality checks ------------------------------------------


@dataclass(frozen=True)
class MinkowskiCheck:
    product: Fraction
    lower: Fraction
    upper: Fraction

    @property
    def holds(self) -> bool:
        return self.lower <= self.product <= self.upper

    def to_json_dict(self) -> dict:
        return {
            "product": rational_str(self.product),
            "lower": rational_str(self.lower),
            "upper": rational_str(self.upper),
            "holds": self.holds,
        }


def minkowski_product_check(res: MinimaResult, body: BodySpec) -> MinkowskiCheck:
    """lambda_1 ... lambda_{n+1} * Vol against [2^(n+1)/(n+1)!, 2^(n+1)]."""
    if not res.exhaustive:
        raise PreconditionFailed("Minkowski check needs exact (exhaustive) minima")
    if any(isinstance(x, Iv) for x in res.lambdas):
        raise PreconditionFailed("Minkowski check needs rational xi")
    product = volume(body)
    for lam in res.lambdas:
        product *= lam
    n = body.n
    return MinkowskiCheck(
        product=product,
        lower=Fraction(1 << (n + 1), factorial(n + 1)),
        upper=Fraction(1 << (n + 1)),
    )


@dataclass(frozen=True)
class DualityProducts:
    products: tuple[Fraction, ...]
    bound: Fraction
    observed_max: Fraction

    @property
    def holds(self) -> bool:
        return all(p >= self.bound for p in self.products)

    def to_json_dict(self) -> dict:
        return {
            "products": [rational_str(p) for p in self.products],
            "bound": rational_str(self.bound),
            "observed_max": rational_str(self.observed_max),
            "holds": self.holds,
        }


DUALITY_DIMENSION_CAP = 4


def duality_products(body: BodySpec) -> DualityProducts:
    """Products lambda_i(X) * lambda_{n-i+2}(Y) for the dual tuple Y,
    each bounded below by 1/(n+1)!."""
    n = body.n
    if n > DUALITY_DIMENSION_CAP:
        raise DimensionCap(f"duality products capped at n = {DUALITY_DIMENSION_CAP}")
    if body.rational_xi() is None:
        raise PreconditionFailed("duality products need rational xi")
    dual = BodySpec(n, body.xi, dual_tuple(body.X))
    res_x = successive_minima(body, exhaustive=True)
    res_y = successive_minima(dual, exhaustive=True)
    products = tuple(
        res_x.lambdas[i - 1] * res_y.lambdas[n - i + 1] for i in range(1, n + 2)
    )
    return DualityProducts(
        products=products,
        bound=Fraction(1, factorial(n + 1)),
        observed_max=max(products),
    )
