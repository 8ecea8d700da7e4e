"""Heights of vectors, polynomials, matrices, and rational subspaces.

The height of a nonzero vector over Q is the product over all places of
the max-norm.  Everything here is exact: clearing a vector to its
primitive integer representative turns the infinite product into
``max |entry|`` and the per-place norms into a finite factorization of
that integer.  Transcendental comparisons (the ``e^{+-n}`` product
bounds, the Mahler-measure bound) are decided against certified dyadic
enclosures, never floats.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Optional, Sequence

from . import _linalg
from .errors import (
    InconsistentRep,
    RankDeficient,
    RootsIncomplete,
    TheoremViolation,
    ZeroPolynomial,
    ZeroVector,
)
from .exactnum.complexroots import certified_root_disks
from .exactnum.dyadic import ComplexDisk, Iv, exp_iv, iv_max, precision_cap
from .exactnum.places import INF, Place, abs_at_place, factor_positive_int
from .exactnum.polynomials import RatPoly
from .serialize import place_key, rational_str

Row = tuple[Fraction, ...]


@dataclass(frozen=True)
class HeightReport:
    """Exact height together with its per-place factorization.

    ``value`` equals the product of ``per_place_norms`` values; every
    place not listed has norm exactly 1.  The Archimedean place is
    always listed.
    """

    value: Fraction
    per_place_norms: tuple[tuple[Place, Fraction], ...]

    def __post_init__(self):
        prod = Fraction(1)
        for _, nrm in self.per_place_norms:
            prod *= nrm
        if prod != self.value:
            raise TheoremViolation(
                f"per-place norms multiply to {prod}, not {self.value}"
            )

    def norm_at(self, v: Place) -> Fraction:
        for place, nrm in self.per_place_norms:
            if place == v:
                return nrm
        return Fraction(1)

    def to_json_dict(self) -> dict:
        return {
            "value": rational_str(self.value),
            "per_place_norms": {
                place_key(v): rational_str(nrm) for v, nrm in self.per_place_norms
            },
        }


def _as_rows(matrix: Sequence[Sequence]) -> list[Row]:
    rows = [tuple(Fraction(x) for x in row) for row in matrix]
    if not rows:
        raise ZeroVector("empty matrix")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("ragged matrix")
    return rows


def height_vector(a: Sequence) -> HeightReport:
    """Product over all places of the max-norm of the coordinate vector."""
    xs = tuple(Fraction(c) for c in a)
    if not xs or all(x == 0 for x in xs):
        raise ZeroVector("height of the zero vector")

    den = lcm(*(x.denominator for x in xs))
    nums = [int(x * den) for x in xs]
    g = 0
    for v in nums:
        g = gcd(g, abs(v))
    # xs = (g/den) * primitive, so every finite norm is a norm of g/den.
    scale = Fraction(g, den)
    value = Fraction(max(abs(v) for v in nums) // g)

    norms: list[tuple[Place, Fraction]] = [(INF, max(abs(x) for x in xs))]
    finite_primes = sorted(
        set(factor_positive_int(scale.numerator)) | set(factor_positive_int(scale.denominator))
    )
    for p in finite_primes:
        norms.append((Place.finite(p), abs_at_place(scale, Place.finite(p))))
    return HeightReport(value=value, per_place_norms=tuple(norms))


def max_norm_at(coords: Sequence, v: Place) -> Fraction:
    """Exact max-norm of a vector at one place (no clearing needed)."""
    best = Fraction(0)
    for x in coords:
        best = max(best, abs_at_place(Fraction(x), v))
    return best


def height_polynomial(p: RatPoly) -> HeightReport:
    """Height of the coefficient vector."""
    if p.is_zero():
        raise ZeroPolynomial("height of the zero polynomial")
    return height_vector(p.coeffs)


def maximal_minors(matrix: Sequence[Sequence]) -> tuple[Fraction, ...]:
    """All order-m minors of an m x n matrix, columns in lexicographic
    subset order.  The order is part of the serialized format."""
    rows = _as_rows(matrix)
    m, n = len(rows), len(rows[0])
    if m > n:
        raise RankDeficient(f"{m} rows in ambient dimension {n}")
    out = []
    for cols in itertools.combinations(range(n), m):
        sub = [[row[j] for j in cols] for row in rows]
        out.append(_linalg.det(sub))
    return tuple(out)


def height_matrix(matrix: Sequence[Sequence]) -> HeightReport:
    """Height of the Plucker vector of maximal minors; needs full row rank."""
    minors = maximal_minors(matrix)
    if all(x == 0 for x in minors):
        raise RankDeficient("all maximal minors vanish")
    return height_vector(minors)


@dataclass(frozen=True)
class SubspaceRep:
    """A subspace of Q^ambient, by a full-rank basis matrix (rows span it)
    and/or a kernel matrix (rows are the linear forms vanishing on it)."""

    ambient: int
    basis_matrix: Optional[tuple[Row, ...]] = None
    kernel_matrix: Optional[tuple[Row, ...]] = None

    @classmethod
    def from_basis(cls, rows: Sequence[Sequence]) -> "SubspaceRep":
        rs = tuple(_as_rows(rows))
        return cls(ambient=len(rs[0]), basis_matrix=rs)

    @classmethod
    def from_kernel(cls, rows: Sequence[Sequence]) -> "SubspaceRep":
        rs = tuple(_as_rows(rows))
        return cls(ambient=len(rs[0]), kernel_matrix=rs)

    @classmethod
    def from_both(
        cls, basis: Sequence[Sequence], kernel: Sequence[Sequence]
    ) -> "SubspaceRep":
        b = tuple(_as_rows(basis))
        k = tuple(_as_rows(kernel))
        if len(b[0]) != len(k[0]):
            raise InconsistentRep("basis and kernel live in different ambients")
        return cls(ambient=len(b[0]), basis_matrix=b, kernel_matrix=k)

    def __post_init__(self):
        if self.basis_matrix is None and self.kernel_matrix is None:
            raise InconsistentRep("need a basis matrix or a kernel matrix")
        for mat in (self.basis_matrix, self.kernel_matrix):
            if mat is not None and any(len(r) != self.ambient for r in mat):
                raise InconsistentRep("row width differs from ambient dimension")

    def dimension(self) -> int:
        if self.basis_matrix is not None:
            return len(self.basis_matrix)
        return self.ambient - len(self.kernel_matrix)


def _full_rank_or_raise(rows: Sequence[Row], what: str) -> None:
    if _linalg.rank(rows) != len(rows):
        raise RankDeficient(f"{what} rows are linearly dependent")


def _height_of_rows(rows: Sequence[Row]) -> HeightReport:
    if not rows:
        # height of the trivial (empty-minor) Plucker vector
        return height_vector((Fraction(1),))
    return height_matrix(rows)


def height_subspace(rep: SubspaceRep) -> HeightReport:
    """Height of a subspace, with the basis/kernel duality enforced.

    When both representations are present they must describe the same
    subspace and give the same height (``InconsistentRep`` otherwise).
    When only one is present, the dual is derived internally and the two
    heights are still compared; a mismatch there is a library bug and
    surfaces as ``TheoremViolation``.
    """
    basis = rep.basis_matrix
    kernel = rep.kernel_matrix
    derived = basis is None or kernel is None
    if basis is not None:
        _full_rank_or_raise(basis, "basis")
    if kernel is not None:
        _full_rank_or_raise(kernel, "kernel")

    if basis is not None and kernel is not None:
        if len(basis) + len(kernel) != rep.ambient:
            raise InconsistentRep("basis and kernel dimensions do not add up")
        for b in basis:
            for k in kernel:
                if sum(x * y for x, y in zip(b, k)) != 0:
                    raise InconsistentRep("kernel rows do not annihilate the basis")
    elif basis is not None:
        kernel = tuple(_linalg.kernel_basis(basis, rep.ambient))
    else:
        basis = tuple(_linalg.kernel_basis(kernel, rep.ambient))

    h_basis = _height_of_rows(basis)
    h_kernel = _height_of_rows(kernel)
    if h_basis.value != h_kernel.value:
        if derived:
            raise TheoremViolation(
                f"duality failed: basis height {h_basis.value} "
                f"!= kernel height {h_kernel.value}"
            )
        raise InconsistentRep(
            f"basis height {h_basis.value} != kernel height {h_kernel.value}"
        )
    return h_basis if rep.basis_matrix is not None else h_kernel


# --- product bounds --------------------------------------------------------


def _lt_exp_times(lhs: Fraction, n: int, rhs: Fraction) -> bool:
    """Decide lhs < e^n * rhs exactly (n >= 1, so e^n is irrational)."""
    prec = 32
    cap = 4 * precision_cap()
    while True:
        e = exp_iv(n, prec)
        if lhs < e.lo * rhs:
            return True
        if lhs >= e.hi * rhs:
            return False
        if prec > cap:  # pragma: no cover - equality is impossible
            raise TheoremViolation("comparison against e^n failed to resolve")
        prec *= 2


def height_poly_product_bounds(
    p_list: Sequence[RatPoly],
) -> tuple[Fraction, Fraction, bool]:
    """For P = P_1 ... P_s of degree n, check
    e^-n * prod H(P_i) < H(P) < e^n * prod H(P_i).

    Returns (H(P), prod H(P_i), flag); the flag is decided against
    certified enclosures of e^n.
    """
    polys = list(p_list)
    if not polys or any(p.is_zero() for p in polys):
        raise ZeroPolynomial("product bound needs nonzero factors")
    product = RatPoly.one()
    height_prod = Fraction(1)
    for p in polys:
        product = product * p
        height_prod *= height_polynomial(p).value
    n = product.degree
    if n < 1:
        raise ZeroPolynomial("product bound needs total degree >= 1")
    h_product = height_polynomial(product).value
    flag = _lt_exp_times(height_prod, n, h_product) and _lt_exp_times(
        h_product, n, height_prod
    )
    return h_product, height_prod, flag


# --- Mahler measure --------------------------------------------------------


@dataclass(frozen=True)
class MahlerMeasureBound:
    """Certified check of M(P)^2 <= (n+1) * ||P||^2 on the primitive
    integer representative of P (the inequality is scale-invariant)."""

    degree: int
    sup_norm: Fraction
    measure_sq: Iv
    bound_sq: Fraction
    holds: bool

    def to_json_dict(self) -> dict:
        return {
            "degree": self.degree,
            "sup_norm": rational_str(self.sup_norm),
            "measure_sq_lo": rational_str(self.measure_sq.lo),
            "measure_sq_hi": rational_str(self.measure_sq.hi),
            "bound_sq": rational_str(self.bound_sq),
            "holds": self.holds,
        }


def _disk_contains(outer: ComplexDisk, inner: ComplexDisk) -> bool:
    if inner.radius > outer.radius:
        return False
    dist_sq = (outer.re - inner.re) ** 2 + (outer.im - inner.im) ** 2
    return dist_sq <= (outer.radius - inner.radius) ** 2


def _disk_multiplicities(
    prim: RatPoly, disks: Sequence[ComplexDisk]
) -> list[int]:
    """Multiplicity of the root certified by each disk."""
    _, parts = prim.squarefree_decomposition()
    if len(parts) == 1 and parts[0][1] == 1:
        return [1] * len(disks)
    mults = [0] * len(disks)
    for s_j, j in parts:
        radius = min(
            (d.radius for d in disks if d.radius > 0), default=Fraction(1, 1024)
        )
        while True:
            inner_disks = certified_root_disks(s_j, max_radius=radius)
            placed = []
            for inner in inner_disks:
                hits = [i for i, d in enumerate(disks) if _disk_contains(d, inner)]
                if len(hits) != 1:
                    break
                placed.append(hits[0])
            else:
                for i in placed:
                    mults[i] = j
                break
            radius /= 16
            if radius < Fraction(1, 1 << (4 * precision_cap())):
                raise RootsIncomplete(
                    "cannot match repeated-factor roots to the given disks"
                )
    if any(m == 0 for m in mults):
        raise RootsIncomplete("some disks matched no squarefree component")
    return mults


def mahler_measure_bound(
    p: RatPoly, roots: Optional[Sequence[ComplexDisk]] = None
) -> MahlerMeasureBound:
    """Certified enclosure of M(P)^2 = lead^2 * prod max(1, |root|)^2 and
    verification of M(P) <= (n+1)^(1/2) ||P||, both squared to stay
    rational.  ``roots`` may supply precomputed certified disks covering
    every distinct complex root; they are recomputed internally when
    absent or too coarse to decide.
    """
    if p.is_zero():
        raise ZeroPolynomial("Mahler measure of zero")
    _, prim = p.content_and_primitive()
    n = prim.degree
    sup = prim.max_norm()
    bound_sq = (n + 1) * sup * sup
    if n == 0:
        m_sq = Iv.point(prim.leading() ** 2)
        return MahlerMeasureBound(0, sup, m_sq, bound_sq, m_sq.hi <= bound_sq)

    sqf = prim.squarefree_part()
    disks = list(roots) if roots is not None else certified_root_disks(
        prim, max_radius=Fraction(1, 1 << 12)
    )
    if len(disks) != sqf.degree:
        raise RootsIncomplete(
            f"{len(disks)} disks for {sqf.degree} distinct roots"
        )
    max_radius = Fraction(1, 1 << 12)
    while True:
        mults = _disk_multiplicities(prim, disks)
        m_sq = Iv.point(prim.leading() ** 2)
        for disk, mult in zip(disks, mults):
            m_sq = m_sq * iv_max(Iv.point(Fraction(1)), disk.abs2_iv()).pow_int(mult)
        if m_sq.hi <= bound_sq:
            return MahlerMeasureBound(n, sup, m_sq, bound_sq, True)
        if m_sq.lo > bound_sq:
            return MahlerMeasureBound(n, sup, m_sq, bound_sq, False)
        # undecided: the disks are too coarse; recompute tighter ones
        max_radius /= 1 << 8
        if max_radius < Fraction(1, 1 << (4 * precision_cap())):
            raise RootsIncomplete("root disks too coarse to decide the bound")
        disks = certified_root_disks(prim, max_radius=max_radius)
