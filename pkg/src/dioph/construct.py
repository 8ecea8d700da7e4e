"""Constructing algebraic integers whose conjugates approximate a target.

The centrepiece is :func:`eisenstein_lift`.  Given a basis of small
polynomials for a dual convex body around the target ``xi``, it assembles
a monic integer polynomial of degree n+1 that

- is Eisenstein at a chosen prime q (hence irreducible), and
- keeps t certified roots inside a prescribed disk around ``xi``.

The lift works coefficient-wise: a model polynomial with t planted roots
near ``xi`` is expressed in the witness basis, the coordinates are
rounded to integers *within fixed residue classes mod q^2*, and the
residue classes are chosen so that the assembled polynomial matches the
Eisenstein pattern exactly.  Rounding perturbs each coordinate by at
most q^2/2, and the planted roots survive the perturbation when the
model's leading scale s is large enough; s is driven by a contraction
parameter eps that is halved until the root cluster certifies.

:func:`approximation_experiment` runs the lift along a schedule of body
scales and reports certified approximation exponents.  The remaining
entry points are self-contained certifiers for classical lower bounds:
:func:`conjugate_distance_check` (no t conjugates of an irreducible
polynomial can crowd a point too tightly),
:func:`liouville_inequality_check` (rational approximation to algebraics
of bounded degree), and :func:`adversarial_approximation_check`, which
certifies that a family of lacunary binary targets defeats *every*
simultaneous approximation by bounded-degree algebraic numbers once the
height is large enough.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional, Sequence

import sympy

from . import _linalg
from .convexbody import BodySpec, MinimaResult, dual_tuple, successive_minima
from .errors import (
    CapExceeded,
    EqualInputs,
    NonIntegerCoefficients,
    PreconditionFailed,
    PrimeDividesD,
    Reducible,
    RootClusterFailed,
    TheoremViolation,
    UndecidableTie,
)
from .exactnum import (
    ComplexDisk,
    Iv,
    LiouvilleBinary,
    RatPoly,
    RealNumber,
    as_real,
    factor_over_rationals,
    int_nth_root,
    kth_nearest_distance,
    log2_iv,
    nth_root_iv,
    precision_cap,
    root_distances,
)
from .serialize import rational_str

__all__ = [
    "AlgebraicInteger",
    "ApproxRecord",
    "AdversarialReport",
    "ConjugateGapReport",
    "GridPoint",
    "LiftReport",
    "LiouvilleGapReport",
    "adversarial_approximation_check",
    "approximation_experiment",
    "base_root_poly",
    "conjugate_distance_check",
    "eisenstein_lift",
    "liouville_inequality_check",
    "liouville_targets",
]

_MAX_CONTRACTIONS = 20


def base_root_poly(t: int) -> RatPoly:
    """The monic model factor with roots i/(t+1), i = 1..t.

    All roots lie strictly inside (0, 1), with gap 1/(t+1) from each
    other and from both endpoints; after rescaling by the disk radius
    the planted cluster therefore sits strictly inside the target disk.
    """
    if t < 1:
        raise PreconditionFailed("base_root_poly needs t >= 1")
    p = RatPoly((Fraction(1),))
    for i in range(1, t + 1):
        p = p * RatPoly((Fraction(-i, t + 1), Fraction(1)))
    return p


# --------------------------------------------------------------------------
# result types


@dataclass(frozen=True)
class AlgebraicInteger:
    """A certified irreducible monic integer polynomial and its roots.

    ``roots`` holds one disjoint certified disk per root (deg many),
    ``selected`` the indices of the conjugates tracked by the
    construction.  Irreducibility is witnessed by the Eisenstein pattern
    at ``eisenstein_prime``, which is re-checked on construction.
    """

    min_poly: RatPoly
    eisenstein_prime: int
    roots: tuple[ComplexDisk, ...]
    selected: tuple[int, ...]

    def __post_init__(self):
        p = self.min_poly
        d = p.degree
        if d < 1:
            raise PreconditionFailed("algebraic integer needs degree >= 1")
        if not p.is_integer():
            raise NonIntegerCoefficients("minimal polynomial must be integral")
        if p[d] != 1:
            raise PreconditionFailed("minimal polynomial must be monic")
        q = self.eisenstein_prime
        if q < 2 or not sympy.isprime(q):
            raise PreconditionFailed(f"{q} is not prime")
        for j in range(d):
            if int(p[j]) % q != 0:
                raise PreconditionFailed("coefficient not divisible by q")
        if int(p[0]) % (q * q) == 0:
            raise PreconditionFailed("constant term divisible by q^2")
        if len(self.roots) != d:
            raise PreconditionFailed("need one certified disk per root")
        sel = self.selected
        if not sel or len(set(sel)) != len(sel):
            raise PreconditionFailed("selected indices must be nonempty, distinct")
        if any(not 0 <= i < d for i in sel):
            raise PreconditionFailed("selected index out of range")

    @property
    def degree(self) -> int:
        return self.min_poly.degree

    @property
    def height(self) -> int:
        return int(self.min_poly.max_norm())

    def to_json_dict(self) -> dict:
        return {
            "min_poly": [int(c) for c in self.min_poly.coeffs],
            "eisenstein_prime": self.eisenstein_prime,
            "roots": [
                {
                    "re": rational_str(d.re),
                    "im": rational_str(d.im),
                    "radius": rational_str(d.radius),
                }
                for d in self.roots
            ],
            "selected": list(self.selected),
        }


@dataclass(frozen=True)
class LiftReport:
    """What the lift actually did: retry count, scales, height bound."""

    prime: int
    epsilon: Fraction
    attempts: int
    kappa: Fraction
    scale: Fraction
    height: int
    height_scale: Fraction  # C with H(P) <= C * Y, fixed before rounding
    height_bound: Fraction  # C * Y

    def to_json_dict(self) -> dict:
        return {
            "prime": self.prime,
            "epsilon": rational_str(self.epsilon),
            "attempts": self.attempts,
            "kappa": rational_str(self.kappa),
            "scale": rational_str(self.scale),
            "height": self.height,
            "height_scale": rational_str(self.height_scale),
            "height_bound": rational_str(self.height_bound),
        }


@dataclass(frozen=True)
class ApproxRecord:
    """One schedule point: the constructed integer and its certificates.

    ``max_conj_distance`` encloses max_i |xi - alpha_i| over the selected
    conjugates and is certified positive; ``exponent`` encloses
    -log(max_conj_distance) / log(height).
    """

    alpha: AlgebraicInteger
    x_scale: Fraction
    y_scale: Fraction
    delta: Fraction
    height: int
    max_conj_distance: Iv
    exponent: Iv
    lift: LiftReport

    def to_json_dict(self) -> dict:
        return {
            "alpha": self.alpha.to_json_dict(),
            "x_scale": rational_str(self.x_scale),
            "y_scale": rational_str(self.y_scale),
            "delta": rational_str(self.delta),
            "height": self.height,
            "max_conj_distance": [
                rational_str(self.max_conj_distance.lo),
                rational_str(self.max_conj_distance.hi),
            ],
            "exponent": [
                rational_str(self.exponent.lo),
                rational_str(self.exponent.hi),
            ],
            "lift": self.lift.to_json_dict(),
        }


# --------------------------------------------------------------------------
# the Eisenstein lift


def _scalar_hi(x) -> Fraction:
    return x.hi if isinstance(x, Iv) else Fraction(x)


def _model_vector(n: int, t: int, s: Fraction, delta: Fraction, xi_like):
    """Coefficients 0..n of R - T^(n+1) in the monomial basis.

    R(T) = (T - xi)^(n+1) + s * B((T - xi)/delta) with B the base-root
    model factor.  ``xi_like`` is a Fraction (exact path) or an Iv
    enclosure; either way the returned list uses the same scalar kind.
    """
    base = base_root_poly(t)
    exact = not isinstance(xi_like, Iv)
    one = Fraction(1) if exact else Iv.point(Fraction(1))
    neg = -xi_like
    pows = [one]
    for _ in range(n + 1):
        pows.append(pows[-1] * neg)
    out = []
    for j in range(n + 1):
        acc = pows[n + 1 - j] * comb(n + 1, j)
        for m in range(j, t + 1):
            w = s * base[m] * comb(m, j) / delta**m
            acc = acc + pows[m - j] * w
        out.append(acc)
    return out


def _residues_mod_q2(gamma: Sequence[Fraction], q: int) -> list[int]:
    q2 = q * q
    out = []
    for g in gamma:
        num = g.numerator % q2
        inv = pow(g.denominator, -1, q2)
        out.append((num * inv) % q2)
    return out


def _nearest_in_class(theta, g: int, q2: int) -> tuple[int, Fraction]:
    """Integer b = g (mod q2) nearest to theta; returns (b, slack).

    ``slack`` bounds |b - theta| - q2/2 from above (zero on the exact
    path).  For an interval theta the rounding may be undecidable; the
    interval is assumed already refined, and on a persistent straddle
    the lower candidate is taken — either choice is within q2/2 plus
    the interval width, which is what slack records.
    """
    if isinstance(theta, Iv):
        m_lo = (theta.lo - g) / q2
        m_hi = (theta.hi - g) / q2
        k_lo = math.floor(m_lo + Fraction(1, 2))
        k_hi = math.floor(m_hi + Fraction(1, 2))
        k = k_lo  # k_lo == k_hi when decided; lower candidate otherwise
        return g + q2 * k, theta.width
    m = (Fraction(theta) - g) / q2
    return g + q2 * math.floor(m + Fraction(1, 2)), Fraction(0)


def eisenstein_lift(
    minima: MinimaResult,
    xi,
    delta: Fraction,
    y_scale: Fraction,
    t: int,
    q: int,
) -> tuple[AlgebraicInteger, LiftReport]:
    """Lift a dual-body basis to an Eisenstein polynomial with a root cluster.

    ``minima`` must carry n+1 independent integer witnesses of degree at
    most n (the output of :func:`dioph.convexbody.successive_minima` on
    the dual body around ``xi``).  The result is monic of degree n+1,
    Eisenstein at q, with t certified roots inside the closed disk of
    radius ``delta`` around ``xi``; its height is at most C * y_scale
    for the a-priori constant C recorded in the report.

    Raises :class:`PrimeDividesD` when q divides the witness-basis
    determinant (pick the next prime), and :class:`RootClusterFailed`
    when the cluster does not certify after 20 contractions of eps.
    """
    witnesses = minima.witnesses
    n = len(witnesses) - 1
    if n < 1:
        raise PreconditionFailed("need at least two witnesses")
    if not 1 <= t <= n:
        raise PreconditionFailed(f"need 1 <= t <= {n}")
    delta = Fraction(delta)
    y_scale = Fraction(y_scale)
    if not 0 < delta < 1 < y_scale:
        raise PreconditionFailed("need 0 < delta < 1 < Y")
    if q < 2 or not sympy.isprime(q):
        raise PreconditionFailed(f"{q} is not prime")
    for w in witnesses:
        if not w.is_integer():
            raise NonIntegerCoefficients("witnesses must be integral")
        if w.degree > n:
            raise PreconditionFailed("witness degree exceeds n")

    xi_real = as_real(xi)
    kappa = max(Fraction(1), _scalar_hi(minima.lambdas[-1]))

    # columns of the change-of-basis matrix are the witness vectors
    mat = [[Fraction(witnesses[j][i]) for j in range(n + 1)] for i in range(n + 1)]
    det = _linalg.det(mat)
    if det == 0:
        raise PreconditionFailed("witness basis is singular")
    if det.denominator != 1:  # pragma: no cover - integer witnesses
        raise PreconditionFailed("witness determinant is not integral")
    if int(det) % q == 0:
        raise PrimeDividesD(f"prime {q} divides the basis determinant")
    inv = _linalg.mat_inverse(mat)

    # residue classes: sum g_i P_i = q (mod q^2) coefficient-wise, so the
    # assembled monic polynomial is Eisenstein at q by construction
    gamma = _linalg.solve_square(
        mat, [Fraction(q)] + [Fraction(0)] * n
    )
    residues = _residues_mod_q2(gamma, q)
    q2 = q * q

    norms = [int(w.max_norm()) for w in witnesses]
    xi_exact = xi_real.as_fraction() if xi_real.is_rational() else None
    cap = precision_cap()

    eps = Fraction(2, q2)
    for attempt in range(1, _MAX_CONTRACTIONS + 2):
        scale = kappa * delta**t * y_scale / eps ** (t + 2)

        if xi_exact is not None:
            rho = _model_vector(n, t, scale, delta, xi_exact)
            theta = [
                sum((r * a for r, a in zip(rho, inv[j])), Fraction(0))
                for j in range(n + 1)
            ]
        else:
            prec = 64
            while True:
                rho = _model_vector(
                    n, t, scale, delta, xi_real.enclosure(prec)
                )
                theta = [
                    sum(
                        (r * a for r, a in zip(rho, inv[j])),
                        Iv.point(Fraction(0)),
                    )
                    for j in range(n + 1)
                ]
                widths = [th.width for th in theta]
                if max(widths) <= Fraction(1, 2) or prec > 4 * cap:
                    break
                prec *= 2

        rounded = [_nearest_in_class(th, g, q2) for th, g in zip(theta, residues)]
        coeffs = [Fraction(0)] * (n + 2)
        coeffs[n + 1] = Fraction(1)
        for b, w in zip((b for b, _ in rounded), witnesses):
            for i, c in enumerate(w.coeffs):
                coeffs[i] += b * c
        poly = RatPoly(tuple(coeffs))

        # a-priori height bound, from |b_i - theta_i| <= q^2/2 + slack
        bound = Fraction(1)
        for (_, slack), th, nm in zip(rounded, theta, norms):
            bound += (abs(_scalar_hi(abs(th))) + Fraction(q2, 2) + slack) * nm
        height_scale = bound / y_scale

        # the Eisenstein pattern is forced by the residue classes
        for j in range(n + 1):
            if int(poly[j]) % q != 0:  # pragma: no cover
                raise TheoremViolation("assembled polynomial lost divisibility")
        if int(poly[0]) % q2 != q % q2:  # pragma: no cover
            raise TheoremViolation("constant term left its residue class")
        height = int(poly.max_norm())
        if height > bound:  # pragma: no cover
            raise TheoremViolation("height exceeded its a-priori bound")

        cluster = _certified_cluster(poly, xi_real, t, delta)
        if cluster is not None:
            disks, selected, max_dist = cluster
            alpha = AlgebraicInteger(
                min_poly=poly,
                eisenstein_prime=q,
                roots=disks,
                selected=selected,
            )
            report = LiftReport(
                prime=q,
                epsilon=eps,
                attempts=attempt,
                kappa=kappa,
                scale=scale,
                height=height,
                height_scale=height_scale,
                height_bound=bound,
            )
            return alpha, report
        if attempt > _MAX_CONTRACTIONS:
            break
        eps /= 2

    raise RootClusterFailed(
        f"no certified {t}-root cluster within {delta} after "
        f"{_MAX_CONTRACTIONS} contractions"
    )


def _certified_cluster(
    poly: RatPoly, xi_real: RealNumber, t: int, delta: Fraction
) -> Optional[tuple[tuple[ComplexDisk, ...], tuple[int, ...], Iv]]:
    """Certify t roots of poly inside the closed delta-disk around xi.

    Returns (disks, selected indices, enclosure of the max selected
    distance) or None when fewer than t roots certify inside (the
    caller then contracts eps and retries).  Among certified-inside
    roots the t with smallest distance enclosures are selected, ties
    broken by real then imaginary part of the certified centers.
    """
    d = poly.degree
    cap = precision_cap()
    prec = 64
    while True:
        dists = root_distances(poly, xi_real, prec)
        if len(dists) != d:  # a repeated root would contradict Eisenstein
            raise TheoremViolation("irreducible polynomial with repeated root")
        inside = [i for i, (_, iv) in enumerate(dists) if iv.hi <= delta]
        outside = sum(1 for _, iv in dists if iv.lo > delta)
        if len(inside) >= t:
            inside.sort(
                key=lambda i: (
                    dists[i][1].lo,
                    dists[i][1].hi,
                    dists[i][0].re,
                    dists[i][0].im,
                )
            )
            selected = tuple(inside[:t])
            max_dist = dists[selected[0]][1]
            for i in selected[1:]:
                iv = dists[i][1]
                max_dist = Iv(max(max_dist.lo, iv.lo), max(max_dist.hi, iv.hi))
            if max_dist.lo > 0:
                disks = tuple(dk for dk, _ in dists)
                return disks, selected, max_dist
        if d - outside < t:
            return None  # certifiably fewer than t roots in the disk
        if prec > 4 * cap:
            return None  # boundary case; let the caller contract eps
        prec *= 2


# --------------------------------------------------------------------------
# schedule experiment


def _rational_power(x: Fraction, e: Fraction) -> Fraction:
    """x**e, exact; requires the result to be rational."""
    x = Fraction(x)
    if x <= 0:
        raise PreconditionFailed("rational power needs a positive base")
    e = Fraction(e)
    num, den = e.numerator, e.denominator
    if den == 1:
        return x**num
    rn = int_nth_root(x.numerator, den)
    rd = int_nth_root(x.denominator, den)
    if rn**den != x.numerator or rd**den != x.denominator:
        raise PreconditionFailed(
            f"{x} has no exact {den}-th root; pick schedule points "
            "that are perfect powers"
        )
    return Fraction(rn, rd) ** num


def _least_prime_avoiding(d: int) -> int:
    p = 2
    while d % p == 0:
        p = sympy.nextprime(p)
    return p


def _log2_enclosure(iv: Iv, prec: int = 64) -> Iv:
    if iv.lo <= 0:
        raise PreconditionFailed("log2 of a nonpositive enclosure")
    return Iv(log2_iv(iv.lo, prec).lo, log2_iv(iv.hi, prec).hi)


def approximation_experiment(
    xi,
    n: int,
    t: int,
    x_schedule: Sequence[Fraction],
    c: Fraction = Fraction(1, 2),
) -> list[ApproxRecord]:
    """Run the lift along a schedule of scales and certify the exponents.

    For each X in the schedule the convex-body scales are
    X_j = c * X^(-t/(k+1-t)) for j <= n - t and X_j = X above, with
    k = floor(n/4); the dual body around ``xi`` supplies the witness
    basis, and the lift runs with Y = X^(t/(k+1-t)) / c and
    delta = c^(1/t) * X^(-(k+1)/(t(k+1-t))).  Each record encloses the
    achieved exponent -log max_i|xi - alpha_i| / log H(alpha).

    Desk-sized: n <= 5 (so k = 1 and t = 1), xi irrational.
    """
    if not 4 <= n <= 5:
        raise PreconditionFailed("experiment supports 4 <= n <= 5")
    k = n // 4
    if not 1 <= t <= k:
        raise PreconditionFailed(f"need 1 <= t <= {k}")
    c = Fraction(c)
    if not 0 < c <= 1:
        raise PreconditionFailed("need 0 < c <= 1")
    xi_real = as_real(xi)
    if xi_real.is_rational():
        raise PreconditionFailed("the target must be irrational")

    exp_grow = Fraction(t, k + 1 - t)
    exp_delta = Fraction(k + 1, t * (k + 1 - t))
    c_root = _rational_power(c, Fraction(1, t))

    records = []
    for x in x_schedule:
        x = Fraction(x)
        if x <= 1:
            raise PreconditionFailed("schedule points must exceed 1")
        grow = _rational_power(x, exp_grow)
        small = c / grow
        scales = tuple(small if j <= n - t else x for j in range(n + 1))
        y = grow / c
        delta = c_root / _rational_power(x, exp_delta)
        if not 0 < delta < 1 < y:
            raise PreconditionFailed(
                f"schedule point {x} gives no usable (delta, Y)"
            )

        body = BodySpec.make(n, xi_real, dual_tuple(scales))
        minima = successive_minima(body, exhaustive=False)
        det = _linalg.det(
            [
                [Fraction(minima.witnesses[j][i]) for j in range(n + 1)]
                for i in range(n + 1)
            ]
        )
        q = _least_prime_avoiding(int(det))
        alpha, lift = eisenstein_lift(minima, xi_real, delta, y, t, q)

        dist = _selected_distance(alpha, xi_real)
        h = lift.height
        if h < 2:  # pragma: no cover - constant term is a nonzero multiple of q
            raise TheoremViolation("height below 2 cannot happen")
        exponent = (-_log2_enclosure(dist)) / log2_iv(Fraction(h), 64)
        records.append(
            ApproxRecord(
                alpha=alpha,
                x_scale=x,
                y_scale=y,
                delta=delta,
                height=h,
                max_conj_distance=dist,
                exponent=exponent,
                lift=lift,
            )
        )
    return records


def _selected_distance(alpha: AlgebraicInteger, xi_real: RealNumber) -> Iv:
    """Certified positive enclosure of max_i |xi - alpha_i|, i selected."""
    cap = precision_cap()
    prec = 64
    while True:
        dists = root_distances(alpha.min_poly, xi_real, prec)
        ivs = [dists[i][1] for i in alpha.selected]
        mx = Iv(max(iv.lo for iv in ivs), max(iv.hi for iv in ivs))
        if mx.lo > 0 and mx.width <= mx.lo / 256:
            return mx
        if prec > 4 * cap:
            if mx.lo > 0:
                return mx
            raise TheoremViolation("selected conjugate coincides with the target")
        prec *= 2


# --------------------------------------------------------------------------
# crowding lower bound for conjugates


@dataclass(frozen=True)
class ConjugateGapReport:
    """Certificate that 1 <= constant * (t-th nearest distance)^(t(t-1))."""

    degree: int
    order: int
    height: int
    constant: int
    distance: Iv
    product: Iv

    def to_json_dict(self) -> dict:
        return {
            "degree": self.degree,
            "order": self.order,
            "height": self.height,
            "constant": self.constant,
            "distance": [rational_str(self.distance.lo), rational_str(self.distance.hi)],
            "product": [rational_str(self.product.lo), rational_str(self.product.hi)],
        }


def conjugate_distance_check(p: RatPoly, xi, t: int) -> ConjugateGapReport:
    """Certify the crowding bound for the t-th nearest conjugate.

    For an irreducible integer polynomial P of degree n >= t >= 2 and
    any real xi, the t-th nearest root alpha_t satisfies

        1 <= (2^n (n+1))^(n-1) * H(P)^(2(n-1)) * |xi - alpha_t|^(t(t-1)).

    Raises :class:`Reducible` when P is not irreducible,
    :class:`TheoremViolation` on a certified violation (none exist), and
    :class:`UndecidableTie` if the comparison straddles at the cap.
    """
    if p.is_zero() or p.degree < 1:
        raise PreconditionFailed("need a nonconstant polynomial")
    if not p.is_integer():
        raise NonIntegerCoefficients("crowding bound needs integer coefficients")
    _, prim = p.content_and_primitive()
    _, factors = factor_over_rationals(prim)
    if len(factors) != 1 or factors[0][1] != 1:
        raise Reducible("crowding bound needs an irreducible polynomial")
    n = prim.degree
    if not 2 <= t <= n:
        raise PreconditionFailed(f"need 2 <= t <= {n}")
    height = int(prim.max_norm())
    constant = (2**n * (n + 1)) ** (n - 1) * height ** (2 * (n - 1))
    power = t * (t - 1)

    xi_real = as_real(xi)
    for rel_bits in (16, 32, 64, 128, 256):
        dist, _ = kth_nearest_distance(prim, xi_real, t, rel_bits=rel_bits)
        product = dist.pow_int(power) * constant
        if product.hi < 1:
            raise TheoremViolation(
                f"crowding bound fails: {rational_str(product.hi)} < 1"
            )
        if product.lo >= 1:
            return ConjugateGapReport(
                degree=n,
                order=t,
                height=height,
                constant=constant,
                distance=dist,
                product=product,
            )
    raise UndecidableTie("crowding product straddles 1 at the precision cap")


# --------------------------------------------------------------------------
# Liouville certificates


def liouville_targets(
    n: int, t: int, precision: int = 64
) -> tuple[LiouvilleBinary, ...]:
    """The t lacunary binary targets used by the adversarial check.

    Target j sums 2^(-a_m) over m = j, j+t, j+2t, ... with
    a_m = floor(b^(m/t)), b = (t+1)n.  The exponent sequence must be
    strictly increasing (guaranteed for b >= 2, asserted anyway) and
    every target is warmed to ``precision`` bits.
    """
    if n < 1 or t < 1:
        raise PreconditionFailed("need n >= 1 and t >= 1")
    out = []
    for j in range(1, t + 1):
        target = LiouvilleBinary(j, t, n)
        exps = target.term_exponents(16)
        if any(a >= b for a, b in zip(exps, exps[1:])):
            raise TheoremViolation("exponent sequence is not strictly increasing")
        target.enclosure(precision)
        out.append(target)
    return tuple(out)


@dataclass(frozen=True)
class LiouvilleGapReport:
    """Certificate of |alpha - r| >= gamma(n) / (H(alpha) H(r)^n).

    ``distance_sq``/``threshold_sq`` are the squared sides of the
    comparison (squaring keeps everything rational).  ``boundary``
    flags exact equality, which only a rational alpha can attain.
    """

    degree: int
    gamma_sq: Fraction
    alpha_height: int
    target_height: int
    distance_sq: object  # Fraction on the exact path, Iv otherwise
    threshold_sq: Fraction
    boundary: bool

    def to_json_dict(self) -> dict:
        if isinstance(self.distance_sq, Iv):
            dist = [rational_str(self.distance_sq.lo), rational_str(self.distance_sq.hi)]
        else:
            dist = rational_str(self.distance_sq)
        return {
            "degree": self.degree,
            "gamma_sq": rational_str(self.gamma_sq),
            "alpha_height": self.alpha_height,
            "target_height": self.target_height,
            "distance_sq": dist,
            "threshold_sq": rational_str(self.threshold_sq),
            "boundary": self.boundary,
        }


def _rational_height(r: Fraction) -> int:
    return max(abs(r.numerator), r.denominator)


def _real_degree_and_height(alpha: RealNumber) -> tuple[int, int]:
    if alpha.is_rational():
        return 1, _rational_height(alpha.as_fraction())
    min_poly = alpha.min_poly()  # type: ignore[attr-defined]
    _, prim = min_poly.content_and_primitive()
    return min_poly.degree, int(prim.max_norm())


def liouville_inequality_check(
    alpha, r: Fraction, n: Optional[int] = None
) -> LiouvilleGapReport:
    """Certify the Liouville gap between an algebraic alpha and rational r.

    gamma(n) = 2^(1-n) (n+1)^(-1/2); the certified inequality is
    |alpha - r| >= gamma(n) * H(alpha)^(-1) * H(r)^(-n), compared in
    squares so the threshold stays rational.  Raises
    :class:`EqualInputs` when alpha = r and :class:`TheoremViolation`
    on a certified violation.
    """
    alpha_real = as_real(alpha)
    r = Fraction(r)
    if alpha_real.sign_of_difference(r) == 0:
        raise EqualInputs("alpha equals the rational target")
    if not alpha_real.is_rational() and not hasattr(alpha_real, "min_poly"):
        raise PreconditionFailed("the Liouville gap needs an algebraic alpha")

    deg_alpha, h_alpha = _real_degree_and_height(alpha_real)
    if n is None:
        n = deg_alpha
    if n < deg_alpha:
        raise PreconditionFailed("degree parameter below the true degree")

    gamma_sq = Fraction(4) ** (1 - n) / (n + 1)
    h_r = _rational_height(r)
    threshold_sq = gamma_sq / (Fraction(h_alpha) ** 2 * Fraction(h_r) ** (2 * n))

    if alpha_real.is_rational():
        lhs = (alpha_real.as_fraction() - r) ** 2
        if lhs < threshold_sq:
            raise TheoremViolation(
                f"Liouville gap fails: {rational_str(lhs)} < "
                f"{rational_str(threshold_sq)}"
            )
        return LiouvilleGapReport(
            degree=n,
            gamma_sq=gamma_sq,
            alpha_height=h_alpha,
            target_height=h_r,
            distance_sq=lhs,
            threshold_sq=threshold_sq,
            boundary=lhs == threshold_sq,
        )

    # irrational algebraic alpha: equality is impossible (it would make
    # alpha rational), so refinement always separates the two sides
    cap = precision_cap()
    prec = 64
    while True:
        lhs = (alpha_real.enclosure(prec) - r).pow_int(2)
        if lhs.lo > threshold_sq:
            return LiouvilleGapReport(
                degree=n,
                gamma_sq=gamma_sq,
                alpha_height=h_alpha,
                target_height=h_r,
                distance_sq=lhs,
                threshold_sq=threshold_sq,
                boundary=False,
            )
        if lhs.hi < threshold_sq:
            raise TheoremViolation("Liouville gap fails for an algebraic alpha")
        if prec > 4 * cap:
            raise UndecidableTie("Liouville comparison straddles at the cap")
        prec *= 2


# --------------------------------------------------------------------------
# adversarial simultaneous approximation


@dataclass(frozen=True)
class GridPoint:
    """Verdict at one height: does some target resist approximation?"""

    height: int
    holds: bool
    slack: Iv  # log2(max_j min-dist_j) + tau * log2(H)
    binding_target: int

    def to_json_dict(self) -> dict:
        return {
            "height": self.height,
            "holds": self.holds,
            "slack": [rational_str(self.slack.lo), rational_str(self.slack.hi)],
            "binding_target": self.binding_target,
        }


@dataclass(frozen=True)
class AdversarialReport:
    """Grid of certified verdicts for the simultaneous lower bound."""

    n: int
    t: int
    kappa: Fraction
    exponent: Iv  # tau = kappa * n^(1/t)
    grid: tuple[GridPoint, ...]
    empirical_threshold: int  # largest failing height on the grid (0 if none)
    min_slack: Optional[Iv]
    polynomials_examined: int
    candidates_checked: int

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "t": self.t,
            "kappa": rational_str(self.kappa),
            "exponent": [rational_str(self.exponent.lo), rational_str(self.exponent.hi)],
            "grid": [g.to_json_dict() for g in self.grid],
            "empirical_threshold": self.empirical_threshold,
            "min_slack": None
            if self.min_slack is None
            else [rational_str(self.min_slack.lo), rational_str(self.min_slack.hi)],
            "polynomials_examined": self.polynomials_examined,
            "candidates_checked": self.candidates_checked,
        }


def _truncated_target(target: LiouvilleBinary, bits: int) -> tuple[Fraction, Fraction]:
    terms = 1
    while True:
        s, tail = target.truncation(terms)
        if tail <= Fraction(1, 1 << bits):
            return s, tail
        terms += 1


def _candidate_sets(
    targets, n: int, h_max: int, floor_cut: Fraction
) -> tuple[list[set], int]:
    """Exact-superset prefilter over all integer polynomials of degree <= n.

    Enumerates every nonconstant integer polynomial with coefficients in
    [-h_max, h_max] (up to sign: nonnegative leading block) and keeps,
    per target, those that *might* have a root closer than floor_cut.
    The bound used is |P(xi)| <= M * dist for the nearest root whenever
    dist <= 1, with M = sum_i i |a_i| 2^(i-1) a derivative bound on the
    disk |z| <= 2 that contains every point within 1 of xi in (0, 1).
    All rejections are certified; float evaluation error is absorbed by
    a fixed absolute slack far above its worst case.
    """
    import numpy as np

    cut = float(floor_cut) * 1.000001
    slack = 1e-6
    xts = [(_truncated_target(t, 200), t) for t in targets]
    points = [
        (float(s), float(tail) * 1.000001) for (s, tail), _ in xts
    ]

    side = np.arange(-h_max, h_max + 1, dtype=np.int64)
    cands: list[set] = [set() for _ in targets]
    examined = 0

    # chunk over the two highest coefficients; vectorize the rest
    top_range = np.arange(0, h_max + 1, dtype=np.int64)
    for a_top in top_range if n >= 2 else [np.int64(0)]:
        if n == 1:
            grids = np.meshgrid(np.arange(0, h_max + 1, dtype=np.int64), side, indexing="ij")
            coeffs = [grids[1], grids[0]]  # a0, a1
        elif n == 2:
            grids = np.meshgrid(side, side, indexing="ij")
            coeffs = [grids[1], grids[0], np.full_like(grids[0], a_top)]
        else:
            grids = np.meshgrid(side, side, side, indexing="ij")
            coeffs = [grids[2], grids[1], grids[0], np.full_like(grids[0], a_top)]
        flat = [g.ravel() for g in coeffs]
        examined += flat[0].size

        m_bound = np.zeros_like(flat[0], dtype=np.float64)
        for i in range(1, len(flat)):
            m_bound += float(i * 2 ** (i - 1)) * np.abs(flat[i]).astype(np.float64)
        nonconst = m_bound > 0

        for j, (x, tail) in enumerate(points):
            val = flat[-1].astype(np.float64)
            for i in range(len(flat) - 2, -1, -1):
                val = val * x + flat[i]
            keep = nonconst & (
                np.abs(val) < m_bound * (cut + tail) + slack
            )
            for row in np.flatnonzero(keep):
                cands[j].add(tuple(int(f[row]) for f in flat))
        if n == 1:
            break
    return cands, examined


def adversarial_approximation_check(
    n: int,
    t: int,
    kappa,
    h_max: int,
    grid_step: int = 10,
) -> AdversarialReport:
    """Certify that the lacunary targets defeat simultaneous approximation.

    With tau = kappa * n^(1/t) and the t targets of
    :func:`liouville_targets`, certifies for each grid height H whether

        max_j  min_alpha |xi_j - alpha|  >=  H^(-tau),

    the minimum over algebraic alpha of degree <= n and height <= H.
    The hypothesis (kappa t)^t > (t+1)^(t+1) is checked exactly.  Small
    heights may fail (the targets are individually very approximable);
    the report records the largest failing grid height and the minimal
    certified slack above it.

    Desk-sized by design: n <= 3 and h_max <= 50, else CapExceeded.
    The enumeration covers every root of every integer polynomial of
    degree <= n and coefficient size <= h_max — a superset of the
    algebraic numbers in play — and attributes heights exactly by
    factoring the few candidates that survive a certified prefilter.
    """
    if n < 1 or t < 1:
        raise PreconditionFailed("need n >= 1 and t >= 1")
    if n > 3 or h_max > 50:
        raise CapExceeded("adversarial check is desk-sized: n <= 3, H <= 50")
    kappa = Fraction(kappa)
    if not (kappa * t) ** t > Fraction(t + 1) ** (t + 1):
        raise PreconditionFailed(
            "need (kappa t)^t > (t+1)^(t+1) for the adversarial bound"
        )
    if grid_step < 1 or h_max < grid_step:
        raise PreconditionFailed("grid step must fit below h_max")

    targets = liouville_targets(n, t)
    tau = nth_root_iv(Fraction(n), t, k=96) * kappa
    grid = sorted(set(range(grid_step, h_max + 1, grid_step)) | {h_max})

    # rational floor for certified rejections: 2 * upper bound of
    # grid[0]^(-tau) dominates H^(-tau) for every grid height
    e_hi = (-(tau * log2_iv(Fraction(grid[0]), 96))).hi
    floor_cut = 2 * Fraction(2) ** math.ceil(e_hi)

    cands, examined = _candidate_sets(targets, n, h_max, floor_cut)

    # factor each candidate once; per target keep (height, distance)
    fact_cache: dict[tuple, list[tuple[int, RatPoly]]] = {}

    def factors_of(coeffs: tuple) -> list[tuple[int, RatPoly]]:
        if coeffs not in fact_cache:
            poly = RatPoly(tuple(Fraction(c) for c in coeffs))
            _, factors = factor_over_rationals(poly)
            out = []
            for f, _mult in factors:
                _, prim = f.content_and_primitive()
                out.append((int(prim.max_norm()), prim))
            fact_cache[coeffs] = out
        return fact_cache[coeffs]

    per_target: list[dict[tuple, tuple[int, Iv]]] = []
    checked = 0
    for j, target in enumerate(targets):
        measured: dict[tuple, tuple[int, Iv]] = {}
        for coeffs in sorted(cands[j]):
            for h_f, f in factors_of(coeffs):
                key = f.coeffs
                if key in measured or h_f > h_max:
                    continue
                dist, _ = kth_nearest_distance(f, target, 1, rel_bits=24)
                measured[key] = (h_f, dist)
                checked += 1
        per_target.append(measured)

    points = []
    failing = 0
    min_slack: Optional[Iv] = None
    for h in grid:
        e_iv = -(tau * log2_iv(Fraction(h), 96))
        lows, highs = [], []
        for measured in per_target:
            rel = [d for h_f, d in measured.values() if h_f <= h]
            lo = min([floor_cut] + [d.lo for d in rel])
            hi = min([d.hi for d in rel], default=None)
            lows.append(lo)
            highs.append(hi)
        binding = max(range(t), key=lambda j: lows[j])
        best_lo = lows[binding]
        if best_lo <= 0:  # a candidate polynomial vanishes at a target:
            raise TheoremViolation("lacunary target is a root of a small polynomial")
        lhs = _log2_enclosure(Iv(best_lo, best_lo), 96)
        slack = lhs - e_iv
        if lhs.lo > e_iv.hi:
            holds = True
        elif all(hi is not None for hi in highs) and all(
            _log2_enclosure(Iv(hi, hi), 96).hi < e_iv.lo for hi in highs
        ):
            holds = False
        else:
            raise UndecidableTie(
                f"verdict at height {h} straddles at the working precision"
            )
        points.append(
            GridPoint(height=h, holds=holds, slack=slack, binding_target=binding + 1)
        )
        if holds:
            if min_slack is None or slack.lo < min_slack.lo:
                min_slack = slack
        else:
            failing = max(failing, h)

    return AdversarialReport(
        n=n,
        t=t,
        kappa=kappa,
        exponent=tau,
        grid=tuple(points),
        empirical_threshold=failing,
        min_slack=min_slack,
        polynomials_examined=examined,
        candidates_checked=checked,
    )
