"""Certified complex root enclosures for rational polynomials.

Roots are approximated numerically (mpmath at an adaptive working
precision) and then certified with exact rational arithmetic: around an
approximation w of a squarefree degree-d polynomial, the closed disk of
radius d*|P(w)/P'(w)| always contains a root.  If the disks built around
the d approximations are pairwise disjoint, each contains exactly one
root and together they contain all of them.  All radii, distances and
memberships below are exact rational data, so the only inexact step
(the numeric solve) is safely behind a certificate.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import BoundaryUndecidable, CapExceeded, ZeroPolynomial
from .dyadic import ComplexDisk, Iv, precision_cap, sqrt_iv
from .polynomials import RatPoly
from .realnumbers import RealNumber, as_real

_MAX_SOLVE_PREC = 1 << 14


def _mpf_to_fraction(x) -> Fraction:
    sign, man, exp, _ = x._mpf_
    if man == 0:
        return Fraction(0)
    v = Fraction(man) * Fraction(2) ** exp
    return -v if sign else v


def _eval_complex(p: RatPoly, re: Fraction, im: Fraction) -> tuple[Fraction, Fraction]:
    """Exact (Re, Im) of P(re + i*im)."""
    acc_re, acc_im = Fraction(0), Fraction(0)
    for c in reversed(p.coeffs):
        acc_re, acc_im = acc_re * re - acc_im * im + c, acc_re * im + acc_im * re
    return acc_re, acc_im


def _certify_at_precision(prim: RatPoly, prec: int) -> list[ComplexDisk] | None:
    import mpmath

    d = prim.degree
    with mpmath.workprec(prec):
        coeffs_desc = [
            mpmath.mpf(c.numerator) / mpmath.mpf(c.denominator)
            for c in reversed(prim.coeffs)
        ]
        try:
            roots = mpmath.polyroots(coeffs_desc, maxsteps=200, extraprec=prec)
        except (mpmath.libmp.NoConvergence, ZeroDivisionError):
            return None
        approx = [
            (_mpf_to_fraction(r.real), _mpf_to_fraction(r.imag))
            for r in (mpmath.mpc(rt) for rt in roots)
        ]

    deriv = prim.derivative()
    disks = []
    for re, im in approx:
        p_re, p_im = _eval_complex(prim, re, im)
        if p_re == 0 and p_im == 0:
            disks.append(ComplexDisk(re, im, Fraction(0)))
            continue
        d_re, d_im = _eval_complex(deriv, re, im)
        dv2 = d_re * d_re + d_im * d_im
        if dv2 == 0:
            return None
        s = Fraction(d * d) * (p_re * p_re + p_im * p_im) / dv2
        radius = sqrt_iv(Iv.point(s), k=max(64, prec)).hi
        disks.append(ComplexDisk(re, im, radius))

    for i in range(d):
        for j in range(i + 1, d):
            dre = disks[i].re - disks[j].re
            dim = disks[i].im - disks[j].im
            rr = disks[i].radius + disks[j].radius
            if dre * dre + dim * dim <= rr * rr:
                return None
    return disks


def certified_root_disks(
    p: RatPoly,
    max_radius: Fraction | None = None,
    start_prec: int = 64,
) -> list[ComplexDisk]:
    """Disjoint certified disks, one per distinct complex root of P."""
    if p.is_zero():
        raise ZeroPolynomial("roots of the zero polynomial")
    if p.degree == 0:
        return []
    prim = p.squarefree_part()
    _, prim = prim.content_and_primitive()
    if prim.degree == 1:
        root = -prim[0] / prim[1]
        return [ComplexDisk(root, Fraction(0), Fraction(0))]

    prec = start_prec
    while prec <= _MAX_SOLVE_PREC:
        disks = _certify_at_precision(prim, prec)
        if disks is not None and (
            max_radius is None or all(dk.radius <= max_radius for dk in disks)
        ):
            return disks
        prec *= 2
    raise CapExceeded("complex root certification exceeded precision budget")


def count_roots_in_disk(p: RatPoly, center, radius) -> int:
    """Number of distinct roots of P in the closed disk |z - center| <= radius.

    ``center`` is a certified real; the count is exact.  Raises
    :class:`BoundaryUndecidable` when some root cannot be classified at
    the precision cap (it then sits numerically on the boundary).
    """
    center = as_real(center)
    radius = Fraction(radius)
    if radius <= 0:
        raise ValueError("radius must be positive")
    cap = precision_cap()
    prec = 32
    while True:
        disks = certified_root_disks(p, max_radius=Fraction(1, 1 << min(prec, 512)))
        c_iv = center.enclosure(prec)
        count = 0
        undecided = False
        for dk in disks:
            side = _disk_side(dk, c_iv, radius)
            if side is True:
                count += 1
            elif side is None:
                undecided = True
        if not undecided:
            return count
        if prec > cap:
            raise BoundaryUndecidable(
                f"a root of {p!r} sits on the query circle within 2^-{cap}"
            )
        prec *= 2


def _disk_side(dk: ComplexDisk, c_iv: Iv, radius: Fraction):
    """True (inside), False (outside) or None (straddles the circle)."""
    u = dk.radius
    dre = abs(Iv.point(dk.re) - c_iv)
    d2 = dre.pow_int(2) + Iv.point(dk.im * dk.im)
    if u <= radius and d2.hi <= (radius - u) ** 2:
        return True
    if d2.lo > (radius + u) ** 2:
        return False
    return None


def root_distances(
    p: RatPoly, center: RealNumber, prec: int
) -> list[tuple[ComplexDisk, Iv]]:
    """Certified enclosures of |center - root| for every distinct root."""
    disks = certified_root_disks(p, max_radius=Fraction(1, 1 << min(prec, 512)))
    c_iv = center.enclosure(prec)
    out = []
    for dk in disks:
        d2 = dk.dist2_iv(c_iv)
        out.append((dk, sqrt_iv(d2, k=prec + 4)))
    return out


def kth_nearest_distance(
    p: RatPoly, center, k: int, rel_bits: int = 16
) -> tuple[Iv, list[tuple[ComplexDisk, Iv]]]:
    """Enclosure of the k-th smallest distance from ``center`` to a root.

    Works with order statistics of the endpoint lists, so exact ties
    (conjugate pairs are equidistant from a real point) are harmless.
    Refines until the enclosure has positive lower bound and width below
    2^-rel_bits relative to it, then returns (enclosure, distances).
    """
    center = as_real(center)
    n_roots = p.squarefree_part().degree
    if not (1 <= k <= n_roots):
        raise ValueError(f"need 1 <= k <= {n_roots}")
    cap = precision_cap()
    prec = 32
    while True:
        dists = root_distances(p, center, prec)
        los = sorted(iv.lo for _, iv in dists)
        his = sorted(iv.hi for _, iv in dists)
        stat = Iv(los[k - 1], his[k - 1])
        if stat.lo > 0 and stat.width <= stat.lo / (1 << rel_bits):
            return stat, dists
        if prec > 4 * cap:
            if stat.lo == 0:
                raise BoundaryUndecidable("center may coincide with a root")
            return stat, dists
        prec *= 2
