"""Smoke checks for dioph.construct against hand-computed values."""

from fractions import Fraction

from dioph.construct import (
    adversarial_approximation_check,
    approximation_experiment,
    base_root_poly,
    conjugate_distance_check,
    eisenstein_lift,
    liouville_inequality_check,
    liouville_targets,
    _rational_power,
)
from dioph.convexbody import MinimaResult
from dioph.errors import (
    EqualInputs,
    PreconditionFailed,
    PrimeDividesD,
    Reducible,
)
from dioph.exactnum import RatPoly, isolate_real_roots

F = Fraction
T = RatPoly((F(0), F(1)))

# 1. base root model polynomials
assert base_root_poly(1) == T - RatPoly((F(1, 2),))
assert base_root_poly(2) == (T - RatPoly((F(1, 3),))) * (T - RatPoly((F(2, 3),)))
print("1. base_root_poly ok")

# 2. rational powers
assert _rational_power(F(8, 27), F(2, 3)) == F(4, 9)
assert _rational_power(F(4), F(-1, 2)) == F(1, 2)
try:
    _rational_power(F(2), F(1, 2))
    raise AssertionError("expected PreconditionFailed")
except PreconditionFailed:
    pass
print("2. _rational_power ok")

# 3. eisenstein lift with the trivial standard basis, rational target
basis = MinimaResult(
    lambdas=(F(1), F(1)),
    witnesses=(RatPoly((F(1),)), T),
    exhaustive=False,
)
alpha, rep = eisenstein_lift(basis, F(1, 2), F(1, 4), F(10), t=1, q=3)
p = alpha.min_poly
print("   lifted:", [int(c) for c in p.coeffs], "attempts", rep.attempts)
assert p.degree == 2 and p[2] == 1
assert int(p[0]) % 3 == 0 and int(p[1]) % 3 == 0
assert int(p[0]) % 9 != 0
assert alpha.eisenstein_prime == 3
assert len(alpha.roots) == 2 and len(alpha.selected) == 1
assert rep.height <= rep.height_bound
# the selected root is certified within 1/4 of 1/2
d = alpha.roots[alpha.selected[0]].dist2_iv(
    __import__("dioph.exactnum", fromlist=["Iv"]).Iv.point(F(1, 2))
)
assert d.hi <= F(1, 16)
print("3. eisenstein_lift ok, H =", rep.height, "bound", rep.height_bound)

# 4. q dividing the basis determinant
bad = MinimaResult(
    lambdas=(F(1), F(1)),
    witnesses=(RatPoly((F(1),)), RatPoly((F(0), F(2)))),
    exhaustive=False,
)
try:
    eisenstein_lift(bad, F(1, 2), F(1, 4), F(10), t=1, q=2)
    raise AssertionError("expected PrimeDividesD")
except PrimeDividesD:
    pass
print("4. PrimeDividesD ok")

# 5. crowding bound: T^2 - 2 at 0 with t = 2 has product 48 * 2 = 96
rep5 = conjugate_distance_check(RatPoly((F(-2), F(0), F(1))), F(0), 2)
assert rep5.constant == 48
assert rep5.product.lo > F(95) and rep5.product.hi < F(97)
rep5b = conjugate_distance_check(RatPoly((F(1), F(0), F(1))), F(0), 2)
assert rep5b.constant == 12 and rep5b.product.lo > F(11)
try:
    conjugate_distance_check(RatPoly((F(-1), F(0), F(1))), F(0), 2)
    raise AssertionError("expected Reducible")
except Reducible:
    pass
print("5. conjugate_distance_check ok")

# 6. lacunary targets: exponents 2, 14, 88 and 6, 36 for n = t = 2
t1, t2 = liouville_targets(2, 2)
assert t1.term_exponents(3) == [2, 14, 88]
assert t2.term_exponents(2) == [6, 36]
assert t1.partial_sum(1) == F(1, 4)
assert t1.partial_sum(2) == F(1, 4) + F(1, 2**14)
print("6. liouville_targets ok")

# 7. Liouville gap
root2 = isolate_real_roots(RatPoly((F(-2), F(0), F(1))))[1]
rep7 = liouville_inequality_check(root2, F(1))
assert rep7.degree == 2 and rep7.alpha_height == 2
assert rep7.threshold_sq == F(1, 48)
assert not rep7.boundary
rep7b = liouville_inequality_check(F(1, 2), F(1, 3))
assert rep7b.degree == 1 and rep7b.threshold_sq == F(1, 2) / 36
try:
    liouville_inequality_check(F(1, 2), F(1, 2))
    raise AssertionError("expected EqualInputs")
except EqualInputs:
    pass
print("7. liouville_inequality_check ok")

# 8. adversarial grid, small corpus
try:
    adversarial_approximation_check(2, 2, F(5, 2), 10)
    raise AssertionError("expected PreconditionFailed")
except PreconditionFailed:
    pass  # (5/2 * 2)^2 = 25 < 27
rep8 = adversarial_approximation_check(2, 2, 3, 10)
print(
    "   grid:",
    [(g.height, g.holds, g.binding_target) for g in rep8.grid],
    "examined",
    rep8.polynomials_examined,
    "cands",
    rep8.candidates_checked,
)
assert rep8.empirical_threshold == 0
assert all(g.holds for g in rep8.grid)
assert rep8.min_slack is not None and rep8.min_slack.lo > 0
print("8. adversarial_approximation_check ok")

# 9. the schedule experiment at a single cheap point
cbrt2 = isolate_real_roots(RatPoly((F(-2), F(0), F(0), F(1))))[0]
recs = approximation_experiment(cbrt2, 4, 1, [F(16)])
r = recs[0]
print(
    "   X=16: H =",
    r.height,
    "dist in",
    (float(r.max_conj_distance.lo), float(r.max_conj_distance.hi)),
    "exponent in",
    (float(r.exponent.lo), float(r.exponent.hi)),
    "attempts",
    r.lift.attempts,
    "q",
    r.lift.prime,
)
assert r.alpha.min_poly.degree == 5
assert r.max_conj_distance.lo > 0
assert r.max_conj_distance.hi <= r.delta
assert r.height <= r.lift.height_bound
print("9. approximation_experiment ok")

print("all construct smoke checks pass")
