"""Exact-arithmetic toolkit for Diophantine approximation over Q.

Subpackages and modules:

- ``exactnum``: places of Q, exact polynomials, certified reals and roots
- ``heights``: Weil heights of vectors, matrices, subspaces, polynomials
- ``convexbody``: adelic convex bodies, volumes, successive minima, duality
- ``hankel``: the derivative pairing, Hankel states, kernel extraction
- ``gelfond``: resultant gap criterion and the irreducible-factor chain
- ``construct``: Eisenstein lifts, approximation experiments, adversaries
- ``cli``: deterministic command-line front end
"""

__version__ = "0.1.0"
