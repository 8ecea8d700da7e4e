"""Exception hierarchy shared across the toolkit.

Hard mathematical assertions (facts that a correct implementation can
never observe failing) raise :class:`TheoremViolation`; everything else
signals misuse of an operation or a documented desk-scale cap.
"""

from __future__ import annotations


class DiophError(Exception):
    """Base class for all toolkit errors."""


class TheoremViolation(DiophError):
    """A certified invariant failed.  This always indicates a bug."""


# --- input validation -------------------------------------------------

class ZeroInput(DiophError):
    """Operation undefined for zero (scalar, vector or polynomial)."""


class ZeroVector(ZeroInput):
    pass


class ZeroPolynomial(ZeroInput):
    pass


class DegreeTooSmall(DiophError):
    pass


class DegreeOverflow(DiophError):
    """Polynomial degree exceeds the declared ambient degree."""


class NonIntegerCoefficients(DiophError):
    pass


class RankDeficient(DiophError):
    pass


class InconsistentRep(DiophError):
    """Basis and kernel representations describe different subspaces."""


class NotCoprime(DiophError):
    pass


class Reducible(DiophError):
    pass


class PreconditionFailed(DiophError):
    pass


# --- desk-scale caps ---------------------------------------------------

class DegreeCapExceeded(DiophError):
    """Exact factorization is only supported up to degree 8."""


class DimensionCap(DiophError):
    pass


class CapExceeded(DiophError):
    """A refinement loop hit the configured precision cap."""


# --- certified arithmetic ----------------------------------------------

class BoundaryUndecidable(CapExceeded):
    """A root sits too close to the query boundary to classify."""


class UndecidableTie(CapExceeded):
    """Two candidate minima could not be separated at the precision cap."""


class RootsIncomplete(DiophError):
    """A root list does not account for every root of the polynomial."""


# --- search / construction ---------------------------------------------

class NoRankDrop(DiophError):
    """No rank drop in the allowed range; extraction impossible."""


class DidNotDrop(NoRankDrop):
    """Diagnostic: the divisor pipeline found no rank drop because the
    effective smallness premise was not satisfied at this scale."""


class EqualInputs(DiophError):
    """Two inputs required to be distinct are equal."""


class CounterexampleFound(DiophError):
    """An exhaustive check found a violating object (carries it)."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class SearchExhausted(DiophError):
    """Exhaustive search ended without the object the premise promises."""


class PrimeDividesD(DiophError):
    """The chosen prime divides the witness-basis determinant."""


class RootClusterFailed(DiophError):
    """The lifted polynomial never acquired the required root cluster."""
