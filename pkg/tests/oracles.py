"""Independent reference implementations used to pin expected values.

Everything in this file is written directly from the defining formulas,
with sympy/mpmath doing the heavy lifting, and deliberately shares no
code with the package.  Tests compare the two routes; when they agree
on random inputs the package value is frozen as correct.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import mpmath
import sympy

F = Fraction
_T = sympy.Symbol("T")


# ---------------------------------------------------------------------------
# exact linear algebra (Leibniz / Gauss over Fraction)
# ---------------------------------------------------------------------------


def det(rows):
    """Leibniz-formula determinant; fine for the sizes tests use."""
    n = len(rows)
    assert all(len(r) == n for r in rows)
    total = F(0)
    for perm in itertools.permutations(range(n)):
        inv = sum(
            1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j]
        )
        sign = -1 if inv % 2 else 1
        term = F(sign)
        for i in range(n):
            term *= F(rows[i][perm[i]])
        total += term
    return total


def det_gauss(rows):
    """Fraction Gaussian-elimination determinant, for matrices too big
    for the Leibniz sum."""
    m = [[F(x) for x in row] for row in rows]
    n = len(m)
    sign = F(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot is None:
            return F(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            sign = -sign
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    prod = sign
    for i in range(n):
        prod *= m[i][i]
    return prod


def rank(rows):
    """Row-reduction rank over Fraction."""
    m = [[F(x) for x in row] for row in rows]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == nrows:
            break
    return r


def kernel(rows):
    """Basis of the right null space, as tuples of Fractions."""
    m = [[F(x) for x in row] for row in rows]
    if not m:
        return []
    nrows, ncols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [F(0)] * ncols
        v[fc] = F(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(tuple(v))
    return basis


def same_row_space(a, b):
    stack_a = list(a) + list(b)
    return rank(a) == rank(b) == rank(stack_a)


# ---------------------------------------------------------------------------
# places and heights, straight from the definitions
# ---------------------------------------------------------------------------


def abs_at(x, p):
    """|x|_p for p a prime, |x|_inf for p = math.inf."""
    x = F(x)
    if p == math.inf:
        return abs(x)
    if x == 0:
        raise ZeroDivisionError("no p-adic absolute value of zero")
    e = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        e += 1
    while den % p == 0:
        den //= p
        e -= 1
    return F(p) ** (-e)


def support_primes(values):
    primes = set()
    for x in values:
        x = F(x)
        for part in (abs(x.numerator), x.denominator):
            if part > 1:
                primes |= set(sympy.factorint(part))
    return sorted(primes)


def height_vector(vec):
    """H(x) = prod over places of max_i |x_i|_v, from the definition."""
    vals = [F(x) for x in vec]
    assert any(v != 0 for v in vals)
    h = max(abs(v) for v in vals)
    for p in support_primes(v for v in vals if v != 0):
        h *= max(abs_at(v, p) for v in vals if v != 0)
    return h


def height_polynomial(coeffs):
    return height_vector(list(coeffs))


def maximal_minors(rows):
    k, m = len(rows), len(rows[0])
    out = []
    for cols in itertools.combinations(range(m), k):
        out.append(det([[rows[i][j] for j in cols] for i in range(k)]))
    return out


def height_matrix(rows):
    return height_vector(maximal_minors(rows))


# ---------------------------------------------------------------------------
# polynomial quantities via sympy
# ---------------------------------------------------------------------------


def to_sympy(coeffs):
    return sympy.Poly(
        [sympy.Rational(F(c).numerator, F(c).denominator) for c in reversed(list(coeffs))],
        _T,
    )


def sylvester(p_coeffs, q_coeffs):
    """The classical Sylvester matrix, coefficients highest-first."""
    p = [F(c) for c in p_coeffs]
    q = [F(c) for c in q_coeffs]
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    while len(q) > 1 and q[-1] == 0:
        q.pop()
    m, n = len(p) - 1, len(q) - 1
    size = m + n
    ph = list(reversed(p))
    qh = list(reversed(q))
    rows = []
    for i in range(n):
        rows.append([F(0)] * i + ph + [F(0)] * (size - i - len(ph)))
    for i in range(m):
        rows.append([F(0)] * i + qh + [F(0)] * (size - i - len(qh)))
    return rows


def resultant(p_coeffs, q_coeffs):
    return det_gauss(sylvester(p_coeffs, q_coeffs))


def discriminant(p_coeffs):
    return F(to_sympy(p_coeffs).discriminant())


def eval_poly(coeffs, x):
    x = F(x)
    acc = F(0)
    for c in reversed(list(coeffs)):
        acc = acc * x + F(c)
    return acc


def derivative(coeffs):
    return [F(c) * i for i, c in enumerate(coeffs)][1:] or [F(0)]


def pair_g(p_coeffs, q_coeffs, n, a):
    """g(P, Q) = sum_j (-1)^j P^(j)(a) Q^(n-j)(a), via sympy derivatives."""
    a = sympy.Rational(F(a).numerator, F(a).denominator)
    P = to_sympy(p_coeffs).as_expr()
    Q = to_sympy(q_coeffs).as_expr()
    total = sympy.Integer(0)
    for j in range(n + 1):
        total += (-1) ** j * sympy.diff(P, _T, j).subs(_T, a) * sympy.diff(
            Q, _T, n - j
        ).subs(_T, a)
    return F(sympy.nsimplify(total))


def hankel_y(q_coeffs, n):
    """y_i = (-1)^i i! Q^(n-i)(0)."""
    Q = to_sympy(q_coeffs).as_expr()
    out = []
    for i in range(n + 1):
        val = sympy.diff(Q, _T, n - i).subs(_T, 0)
        out.append(F((-1) ** i * math.factorial(i)) * F(val))
    return out


def hankel_z(q_coeffs, n, xi):
    xi = sympy.Rational(F(xi).numerator, F(xi).denominator)
    Q = to_sympy(q_coeffs).as_expr()
    out = []
    for i in range(n + 1):
        val = sympy.diff(Q, _T, n - i).subs(_T, xi)
        out.append(F((-1) ** i * math.factorial(i)) * F(val))
    return out


def hankel_matrix(seq, level, n):
    return [
        [seq[i + j] for j in range(n - level + 1)] for i in range(level + 1)
    ]


def nth_root_floor(m, t):
    root, _exact = sympy.integer_nthroot(m, t)
    return int(root)


def mp_root_distances(coeffs, center, dps=60):
    """Sorted |center - root| over all complex roots, at high precision."""
    with mpmath.workdps(dps):
        cs = [mpmath.mpf(F(c).numerator) / mpmath.mpf(F(c).denominator) for c in coeffs]
        roots = mpmath.polyroots(list(reversed(cs)), maxsteps=200, extraprec=200)
        c = mpmath.mpf(F(center).numerator) / mpmath.mpf(F(center).denominator)
        return sorted(float(abs(r - c)) for r in roots)


def is_irreducible(coeffs):
    p = to_sympy(coeffs)
    return len(p.factor_list()[1]) == 1 and p.factor_list()[1][0][1] == 1


# ---------------------------------------------------------------------------
# brute-force successive minima for small bodies (rational xi only)
# ---------------------------------------------------------------------------


def _mu(coeffs, n, xi, X):
    """max_j |P^(j)(xi)| / X_j for the full coefficient vector."""
    cur = [F(c) for c in coeffs]
    worst = F(0)
    for j in range(n + 1):
        worst = max(worst, abs(eval_poly(cur, xi)) / F(X[j]))
        cur = derivative(cur)
    return worst


def verify_minima(n, xi, X, claimed_lambdas, claimed_witnesses):
    """Recompute the minima by box enumeration up to the largest claim.

    Returns the independently computed lambda tuple.  The coefficient
    box comes from inverting the Taylor map: |P^(j)(xi)| <= cap * X_j
    pins every shifted coefficient, and the standard coefficients are
    binomial combinations of those.
    """
    xi = F(xi)
    cap = max(F(v) for v in claimed_lambdas)
    # shifted coefficients c_j = P^(j)(xi)/j! obey |c_j| <= cap X_j / j!
    shifted = [cap * F(X[j]) / math.factorial(j) for j in range(n + 1)]
    bounds = []
    for i in range(n + 1):
        b = sum(
            math.comb(j, i) * abs(xi) ** (j - i) * shifted[j]
            for j in range(i, n + 1)
        )
        bounds.append(int(b))  # floor: integer coefficients
    ranges = [range(-b, b + 1) for b in bounds]
    scored = []
    for vec in itertools.product(*ranges):
        if all(v == 0 for v in vec):
            continue
        m = _mu(vec, n, xi, X)
        if m <= cap:
            scored.append((m, vec))
    scored.sort()
    lambdas = []
    chosen = []
    for m, vec in scored:
        if rank(chosen + [list(vec)]) == len(chosen) + 1:
            chosen.append(list(vec))
            lambdas.append(m)
            if len(lambdas) == n + 1:
                break
    # claimed witnesses must actually achieve the claimed values
    for lam, wit in zip(claimed_lambdas, claimed_witnesses):
        padded = list(wit) + [F(0)] * (n + 1 - len(wit))
        assert _mu(padded, n, xi, X) == F(lam)
    return tuple(lambdas)
