"""Exact linear algebra over Q and Z used throughout the package.

Everything here is deterministic and fraction-exact: Bareiss elimination
for determinants, rational RREF for ranks and kernels, a row-style
Hermite normal form over Z, and a small exact LLL for finding short
vectors of a rational positive-definite form.  Matrices are plain lists
of lists; vectors are tuples.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

Vec = tuple[Fraction, ...]


def _to_integer_rows(rows):
    """Scale each row to integers; return (int rows, product of scalings)."""
    out = []
    scale = Fraction(1)
    for row in rows:
        den = lcm(*(Fraction(x).denominator for x in row)) if row else 1
        out.append([int(Fraction(x) * den) for x in row])
        scale *= den
    return out, scale


def det(rows) -> Fraction:
    """Exact determinant via fraction-free Bareiss elimination."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in rows):
        raise ValueError("det needs a square matrix")
    m, scale = _to_integer_rows(rows)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return Fraction(sign * m[n - 1][n - 1]) / scale


def rref(rows):
    """Reduced row echelon form; returns (new rows, pivot column list)."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def kernel_basis(rows, ncols=None):
    """Basis of the right kernel {x : M x = 0} in RREF-canonical form.

    Each basis vector is scaled to a primitive integer vector whose first
    nonzero entry is positive, making the output deterministic.
    """
    if not rows:
        if ncols is None:
            raise ValueError("kernel of an empty matrix needs ncols")
        m, pivots = [], []
    else:
        ncols = len(rows[0])
        m, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][fc]
        basis.append(primitive_integer_vector(v))
    return basis


def solve_square(rows, rhs):
    """Unique solution of a nonsingular square system, exact."""
    n = len(rows)
    aug = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(rows)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("singular system")
    return tuple(red[i][n] for i in range(n))


def mat_inverse(rows):
    """Exact inverse of a nonsingular square matrix."""
    n = len(rows)
    aug = [
        [Fraction(x) for x in row] + [Fraction(1 if i == j else 0) for j in range(n)]
        for i, row in enumerate(rows)
    ]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


def primitive_integer_vector(v) -> Vec:
    """Scale a nonzero rational vector to a primitive integer vector.

    The first nonzero coordinate of the result is positive; this is the
    canonical representative used for kernels and witnesses.
    """
    fr = [Fraction(x) for x in v]
    if all(x == 0 for x in fr):
        raise ValueError("zero vector has no primitive representative")
    den = lcm(*(x.denominator for x in fr))
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    ints = [x // g for x in ints]
    first = next(x for x in ints if x != 0)
    if first < 0:
        ints = [-x for x in ints]
    return tuple(Fraction(x) for x in ints)


def row_space_equal(rows_a, rows_b) -> bool:
    """Do two sets of rows span the same subspace?  Exact."""
    ra = rank(rows_a)
    rb = rank(rows_b)
    if ra != rb:
        return False
    return rank(list(rows_a) + list(rows_b)) == ra


def hnf(rows):
    """Row-style Hermite normal form of an integer matrix.

    Returns the canonical HNF with positive pivots and entries above each
    pivot reduced to [0, pivot).  Zero rows are dropped.
    """
    m = [[int(x) for x in row] for row in rows]
    if not m:
        return []
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        # find a pivot row and clear the column below it with gcd steps
        piv = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, len(m)):
            while m[i][c] != 0:
                q = m[r][c] // m[i][c]
                m[r] = [a - q * b for a, b in zip(m[r], m[i])]
                m[r], m[i] = m[i], m[r]
        if m[r][c] < 0:
            m[r] = [-x for x in m[r]]
        for i in range(r):
            q = m[i][c] // m[r][c]
            if q:
                m[i] = [a - q * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return [row for row in m[:r] if any(row)]


def is_identity(rows, n) -> bool:
    if len(rows) != n:
        return False
    return all(
        rows[i][j] == (1 if i == j else 0) for i in range(n) for j in range(len(rows[0]))
    )


# --- exact LLL on a rational quadratic form ------------------------------

def lll_reduce(gram, delta=Fraction(3, 4)):
    """LLL-reduce the standard basis of Z^n under a positive form.

    ``gram`` is the exact Gram matrix of the form.  Returns the list of
    reduced basis vectors (integer tuples).  Entirely rational, hence
    deterministic; intended for small n (the package uses n <= 8).
    """
    n = len(gram)
    basis = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    g = [[Fraction(gram[i][j]) for j in range(n)] for i in range(n)]

    def ip(u, v):
        return sum(
            u[i] * g[i][j] * v[j] for i in range(n) for j in range(n) if u[i] and v[j]
        )

    def gso():
        mu = [[Fraction(0)] * n for _ in range(n)]
        bstar2 = [Fraction(0)] * n
        proj = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            proj[i] = [Fraction(x) for x in basis[i]]
            for j in range(i):
                mu[i][j] = ip(basis[i], proj[j]) / bstar2[j]
                proj[i] = [a - mu[i][j] * b for a, b in zip(proj[i], proj[j])]
            bstar2[i] = ip(proj[i], proj[i])
        return mu, bstar2

    mu, bstar2 = gso()
    k = 1
    while k < n:
        # size reduction
        for j in range(k - 1, -1, -1):
            q = (mu[k][j] + Fraction(1, 2)).__floor__()
            if q:
                basis[k] = [a - q * b for a, b in zip(basis[k], basis[j])]
                mu, bstar2 = gso()
        if bstar2[k] >= (delta - mu[k][k - 1] ** 2) * bstar2[k - 1]:
            k += 1
        else:
            basis[k], basis[k - 1] = basis[k - 1], basis[k]
            mu, bstar2 = gso()
            k = max(k - 1, 1)
    return [tuple(row) for row in basis]
