import random
from fractions import Fraction

from dioph import _linalg
from dioph.convexbody import BodySpec
from dioph.errors import (
    DidNotDrop,
    NoRankDrop,
    PreconditionFailed,
    SearchExhausted,
)
from dioph.exactnum import RatPoly, isolate_real_roots
from dioph.hankel import (
    auxiliary_polynomial,
    bilinear_pairing,
    build_state,
    construct_divisor,
    divisor_power_bound,
    dual_inclusion_check,
    kernel_space,
    pairing_bound_check,
    rank_drop_extract,
    ratio_bound_check,
)

F = Fraction
T = RatPoly.monomial(1)


def poly(*cs):
    return RatPoly([F(c) for c in cs])


# 1. pairing values
for n in range(1, 6):
    assert bilinear_pairing(poly(1), RatPoly.monomial(n), n) == F(
        __import__("math").factorial(n)
    ), n
    for i in range(n + 1):
        got = bilinear_pairing(RatPoly.monomial(i), RatPoly.monomial(n - i), n)
        import math

        want = F((-1) ** i * math.factorial(i) * math.factorial(n - i))
        assert got == want, (n, i, got, want)
print("pairing basis values OK")

# 2. a-independence, random
rng = random.Random(7)
for _ in range(50):
    n = rng.randint(1, 4)
    p = RatPoly([rng.randint(-9, 9) for _ in range(rng.randint(1, n + 1))])
    q = RatPoly([rng.randint(-9, 9) for _ in range(rng.randint(1, n + 1))])
    v0 = bilinear_pairing(p, q, n, at=0)
    v1 = bilinear_pairing(p, q, n, at=F(3, 7))
    assert v0 == v1, (p.coeffs, q.coeffs, v0, v1)
    # symmetry g(P,Q) = (-1)^n g(Q,P)
    assert bilinear_pairing(q, p, n) == (-1) ** n * v0
sqrt2 = isolate_real_roots(poly(-2, 0, 1))[1]
for _ in range(10):
    p = RatPoly([rng.randint(-9, 9) for _ in range(3)])
    q = RatPoly([rng.randint(-9, 9) for _ in range(3)])
    v0 = bilinear_pairing(p, q, 2, at=0)
    box = bilinear_pairing(p, q, 2, at=sqrt2)
    assert box.lo <= v0 <= box.hi
print("a-independence OK")

# 3. build_state on Q = T^n
for n in (2, 3, 4):
    st = build_state(RatPoly.monomial(n), F(1, 3), n)
    import math

    assert st.y == tuple([F(math.factorial(n))] + [F(0)] * n)
    assert all(r == 1 for r in st.ranks), st.ranks
print("T^n state OK")

# 4. engineered Q = (T-1)^2, n = 2, xi = 0
q = poly(1, -2, 1)
st = build_state(q, F(0), 2)
assert st.y == (F(2), F(2), F(2))
assert st.ranks == (1, 1, 1)
ks = kernel_space(st, 1)
assert ks.dim == 1 and ks.vectors == ((1, -1),), ks.vectors
h, p = rank_drop_extract(st, 1)
assert h == 1 and p == poly(-1, 1), (h, p.coeffs)
v0 = kernel_space(st, 0)
shift_rows = [(F(-1), F(1), F(0)), (F(0), F(-1), F(1))]
assert _linalg.row_space_equal(shift_rows, v0.vectors)
print("(T-1)^2 chain OK")

# 5. construct_divisor, rational xi with exact zeros: Q = T^2 at 0
q = RatPoly.monomial(2)
body = BodySpec.make(2, 0, (F(1, 10**9), F(1), F(2)))
h, p, rep = construct_divisor(body, q, k=1, t=2)
assert h == 1 and p == T, (h, p.coeffs)
assert rep.split.applied and rep.split.selected == T
assert rep.decay_lhs == 0
assert not rep.premise_holds  # growth part >= 1 at t = 2
print("construct_divisor exact-zero pipeline OK:", rep.to_json_dict()["split"])

# 6. construct_divisor, irrational xi: Q = (T-1)^2 at sqrt2
q = poly(1, -2, 1)
body = BodySpec.make(2, sqrt2, (F(1, 5), F(9, 10), F(3)))
h, p, rep = construct_divisor(body, q, k=1, t=1)
assert h == 1 and p == poly(-1, 1)
assert not rep.split.applied and "split constant" in rep.split.reason
print("construct_divisor irrational OK; decay lhs:", rep.decay_lhs)

# 7. DidNotDrop diagnostic
q = poly(0, -1, 2)
body = BodySpec.make(2, 0, (F(1, 2), F(1), F(4)))
try:
    construct_divisor(body, q, k=1, t=2)
    raise AssertionError("expected DidNotDrop")
except DidNotDrop as e:
    print("DidNotDrop OK:", e)

# 8. ratio_bound_check standalone on the exact-zero state
st = build_state(RatPoly.monomial(2), F(0), 2)
r = ratio_bound_check(st, 0, 2, T, (F(1, 10**9), F(1), F(2)))
assert r.lhs == 0 and r.norm_n == 2
print("ratio_bound_check OK:", r.to_json_dict())

# 9. dual inclusion, nonvacuous at rational xi
st = build_state(RatPoly.monomial(2), F(0), 2)
X = (F(1, 1000), F(1, 2), F(2))
assert dual_inclusion_check(st, 0, X) is True
assert dual_inclusion_check(st, 1, X) is True
assert dual_inclusion_check(st, 0, X, samples=20) is True
# irrational xi route
st2 = build_state(poly(1, -2, 1), sqrt2, 2)
assert dual_inclusion_check(st2, 0, (F(1, 5), F(9, 10), F(3))) is True
print("dual_inclusion_check OK")

# 10. auxiliary polynomial: engineered premise success and failure
st = build_state(RatPoly.monomial(2), F(0), 2)
eps = F(1, 2**22)
g, rep = auxiliary_polynomial(st, 0, 1, (eps, eps, F(2)))
assert g == RatPoly.monomial(2), g.coeffs
assert rep.premise_holds and rep.height == 1
print("auxiliary_polynomial OK:", rep.to_json_dict())
try:
    auxiliary_polynomial(st, 1, 0, (F(1, 1000), F(1, 2), F(2)))
    raise AssertionError("expected SearchExhausted")
except SearchExhausted as e:
    print("SearchExhausted OK:", e)

# 11. divisor power bound
dp = divisor_power_bound(T, RatPoly.monomial(2), 1)
assert dp.power == 2 and dp.quotient == poly(1)
print("divisor_power_bound OK:", dp.to_json_dict())

# 12. pairing bound check
p = poly(1, 1, 1)
bp = BodySpec.make(2, 0, (F(1), F(1), F(2)))
rep = pairing_bound_check(p, p, bp, bp)
assert rep.value == 3 and rep.holds and not rep.vacuous
print("pairing_bound_check OK:", rep.to_json_dict())

# 13. NoRankDrop and preconditions
st = build_state(poly(1, 1, 1), F(0), 2)
try:
    rank_drop_extract(st, 1)
    raise AssertionError("expected NoRankDrop")
except NoRankDrop:
    print("NoRankDrop OK")
try:
    ratio_bound_check(st, 0, 1, T, (F(2), F(1), F(2)))
    raise AssertionError("expected PreconditionFailed")
except PreconditionFailed as e:
    print("PreconditionFailed (ordering) OK:", e)

print("ALL HANKEL SMOKE TESTS PASSED")
