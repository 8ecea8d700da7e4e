"""Dyadic balls and exact interval arithmetic over the rationals.

All certified real computation in the package is reduced to interval
arithmetic with ``Fraction`` endpoints.  Endpoints produced by refinement
are dyadic (denominator a power of two), which keeps them cheap and lets
a ball be serialized as two mantissa/exponent pairs.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import NamedTuple

from ..errors import CapExceeded, ZeroInput

ZERO = Fraction(0)
ONE = Fraction(1)

DEFAULT_PRECISION_CAP = 256


def precision_cap() -> int:
    """Binary refinement cap; override with DIOPH_PRECISION_CAP."""
    raw = os.environ.get("DIOPH_PRECISION_CAP")
    if raw is None:
        return DEFAULT_PRECISION_CAP
    cap = int(raw)
    if cap <= 0:
        raise ValueError("DIOPH_PRECISION_CAP must be positive")
    return cap


def dyadic_floor(x: Fraction, k: int) -> Fraction:
    """Largest multiple of 2^-k that is <= x."""
    scaled = x * (1 << k) if k >= 0 else x / (1 << -k)
    n = scaled.numerator // scaled.denominator
    return Fraction(n, 1 << k) if k >= 0 else Fraction(n * (1 << -k))


def dyadic_ceil(x: Fraction, k: int) -> Fraction:
    return -dyadic_floor(-x, k)


def is_dyadic(x: Fraction) -> bool:
    d = x.denominator
    return d & (d - 1) == 0


def _man_exp(x: Fraction) -> tuple[int, int]:
    """Write a dyadic rational as man * 2^exp with odd (or zero) mantissa."""
    if not is_dyadic(x):
        raise ValueError(f"{x} is not dyadic")
    if x == 0:
        return 0, 0
    man = x.numerator
    exp = -(x.denominator.bit_length() - 1)
    while man % 2 == 0:
        man //= 2
        exp += 1
    return man, exp


class Iv(NamedTuple):
    """Closed interval [lo, hi] with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    @staticmethod
    def point(x) -> "Iv":
        x = Fraction(x)
        return Iv(x, x)

    @staticmethod
    def hull(*xs) -> "Iv":
        vals = [Fraction(x) for x in xs]
        return Iv(min(vals), max(vals))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __add__(self, other):
        o = _as_iv(other)
        return Iv(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Iv(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-_as_iv(other))

    def __rsub__(self, other):
        return _as_iv(other) + (-self)

    def __mul__(self, other):
        o = _as_iv(other)
        cands = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Iv(min(cands), max(cands))

    __rmul__ = __mul__

    def inv(self) -> "Iv":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval straddles zero")
        return Iv(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        return self * _as_iv(other).inv()

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Iv(ZERO, max(-self.lo, self.hi))

    def pow_int(self, k: int) -> "Iv":
        if k < 0:
            return self.pow_int(-k).inv()
        out = Iv.point(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def contains(self, x) -> bool:
        x = Fraction(x)
        return self.lo <= x <= self.hi

    def strictly_positive(self) -> bool:
        return self.lo > 0

    def sign(self) -> int | None:
        """Certified sign, or None when the interval straddles zero."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None

    def round_out(self, k: int) -> "Iv":
        """Round endpoints outward to multiples of 2^-k (keeps them small)."""
        return Iv(dyadic_floor(self.lo, k), dyadic_ceil(self.hi, k))


def _as_iv(x) -> Iv:
    if isinstance(x, Iv):
        return x
    return Iv.point(x)


def iv_max(*ivs: Iv) -> Iv:
    return Iv(max(i.lo for i in ivs), max(i.hi for i in ivs))


def iv_min(*ivs: Iv) -> Iv:
    return Iv(min(i.lo for i in ivs), min(i.hi for i in ivs))


@dataclass(frozen=True)
class DyadicBall:
    """center +/- radius with dyadic center and radius."""

    center: Fraction
    radius: Fraction

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("negative radius")
        if not (is_dyadic(self.center) and is_dyadic(self.radius)):
            raise ValueError("DyadicBall endpoints must be dyadic")

    @staticmethod
    def from_interval(iv: Iv, k: int | None = None) -> "DyadicBall":
        """Enclose an interval; endpoints are rounded outward to 2^-k."""
        if k is None:
            k = max(iv.lo.denominator.bit_length(), iv.hi.denominator.bit_length()) + 1
        lo, hi = dyadic_floor(iv.lo, k), dyadic_ceil(iv.hi, k)
        return DyadicBall((lo + hi) / 2, (hi - lo) / 2)

    def to_interval(self) -> Iv:
        return Iv(self.center - self.radius, self.center + self.radius)

    def to_json_dict(self) -> dict:
        c_man, c_exp = _man_exp(self.center)
        r_man, r_exp = _man_exp(self.radius)
        return {"c_man": c_man, "c_exp": c_exp, "r_man": r_man, "r_exp": r_exp}

    @staticmethod
    def from_json_dict(d: dict) -> "DyadicBall":
        c = Fraction(d["c_man"]) * Fraction(2) ** d["c_exp"]
        r = Fraction(d["r_man"]) * Fraction(2) ** d["r_exp"]
        return DyadicBall(c, r)


@dataclass(frozen=True)
class ComplexDisk:
    """Closed disk in the complex plane with rational center and radius."""

    re: Fraction
    im: Fraction
    radius: Fraction

    def re_iv(self) -> Iv:
        return Iv(self.re - self.radius, self.re + self.radius)

    def im_iv(self) -> Iv:
        return Iv(self.im - self.radius, self.im + self.radius)

    def abs2_iv(self) -> Iv:
        """Enclosure of |z|^2 over the disk."""
        return abs(self.re_iv()).pow_int(2) + abs(self.im_iv()).pow_int(2)

    def dist2_iv(self, point_re: Iv, point_im: Iv = Iv(ZERO, ZERO)) -> Iv:
        """Enclosure of squared distance from the disk to a boxed point."""
        dre = abs(self.re_iv() - point_re)
        dim = abs(self.im_iv() - point_im)
        return dre.pow_int(2) + dim.pow_int(2)


# --- enclosures of classical functions ----------------------------------

def sqrt_iv(x: Iv, k: int = 64) -> Iv:
    """Enclosure of sqrt on a nonnegative interval, 2^-k tight."""
    if x.lo < 0:
        raise ZeroInput("sqrt of an interval reaching below zero")

    def lo_root(v: Fraction) -> Fraction:
        scaled = v * (1 << (2 * k))
        return Fraction(isqrt(scaled.numerator // scaled.denominator), 1 << k)

    def hi_root(v: Fraction) -> Fraction:
        scaled = v * (1 << (2 * k))
        n = scaled.numerator // scaled.denominator
        r = isqrt(n)
        if r * r < n or scaled != n:
            r += 1
        return Fraction(r, 1 << k)

    return Iv(lo_root(x.lo), hi_root(x.hi))


def int_nth_root(m: int, n: int) -> int:
    """floor(m ** (1/n)) for m >= 0 with exact integer arithmetic."""
    if m < 0 or n <= 0:
        raise ValueError("int_nth_root needs m >= 0, n >= 1")
    if m == 0:
        return 0
    if n == 1:
        return m
    if n == 2:
        return isqrt(m)
    x = 1 << (m.bit_length() // n + 1)
    while True:
        y = ((n - 1) * x + m // x ** (n - 1)) // n
        if y >= x:
            break
        x = y
    while x ** n > m:
        x -= 1
    return x


def nth_root_iv(x: Fraction, n: int, k: int = 64) -> Iv:
    """Enclosure of x ** (1/n) for rational x >= 0, width <= 2^-k."""
    if x < 0:
        raise ZeroInput("even roots of negatives are not real")
    scaled = x * (Fraction(1 << (n * k)))
    m = scaled.numerator // scaled.denominator
    r = int_nth_root(m, n)
    lo = Fraction(r, 1 << k)
    hi = Fraction(r + 1, 1 << k)
    return Iv(lo, hi)


def exp_iv(k: int, prec: int = 64) -> Iv:
    """Enclosure of e^k for integer k (k may be negative)."""
    if k < 0:
        return exp_iv(-k, prec).inv()
    if k == 0:
        return Iv.point(1)
    # e^k = sum k^j / j!, truncated once the tail is dominated.
    total = Fraction(0)
    term = Fraction(1)
    j = 0
    target = Fraction(1, 1 << (prec + 4))
    while True:
        total += term
        j += 1
        term = term * k / j
        # tail <= 2 * term once j >= 2k, and we also demand it be tiny
        if j >= 2 * k and term * 2 < target * max(1, total):
            break
    tail = term * 2
    return Iv(total, total + tail).round_out(prec + 2)


def log2_iv(x: Fraction, prec: int = 48) -> Iv:
    """Enclosure of log2(x) for rational x > 0, width <= 2^(1-prec).

    Classical digit extraction: normalize x = 2^e * m with m in [1, 2),
    then repeatedly square m, emitting one binary digit of log2(m) per
    squaring.  The working value is rounded outward to dyadics so the
    numerators stay bounded.
    """
    if x <= 0:
        raise ZeroInput("log2 of a nonpositive number")
    e = x.numerator.bit_length() - x.denominator.bit_length()
    m = x / Fraction(2) ** e
    if m < 1:
        m *= 2
        e -= 1
    if m == 1:
        return Iv.point(Fraction(e))
    lo = hi = m
    guard = prec + 16
    acc = Fraction(0)
    step = 0
    while step < prec:
        lo = dyadic_floor(lo * lo, guard)
        hi = dyadic_ceil(hi * hi, guard)
        step += 1
        if lo >= 2:
            lo /= 2
            hi /= 2
            acc += Fraction(1, 1 << step)
        elif hi >= 2:
            # digit undecided at this working precision: stop with the
            # hull [acc, acc + 2^(1-step)], which is still valid
            break
    # invariant: log2(m) = acc + log2(current) / 2^step with the true
    # current value in [1, 2) (or in [1, hi] at an early break), hence
    # the residual lies in [0, 2^(1-step)]
    return Iv(Fraction(e) + acc, Fraction(e) + acc + Fraction(2, 1 << step))
