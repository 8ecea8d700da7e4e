"""Canonical string forms shared by reports and the command-line layer.

Rationals travel as ``"num/den"`` in lowest terms with a positive
denominator (integers keep an explicit ``"/1"`` so the grammar has a
single production).  Places are keyed ``"inf"`` or the prime in decimal.
"""

from __future__ import annotations

from fractions import Fraction

from .exactnum.places import INF, Place


def rational_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    return Fraction(s.strip())


def place_key(v: Place) -> str:
    return v.label


def parse_place(key: str) -> Place:
    if key == "inf":
        return INF
    return Place.finite(int(key))
