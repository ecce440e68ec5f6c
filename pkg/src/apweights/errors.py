"""Exception types shared across the package.

Blow-up of a quotient estimator is NOT an error here: estimators return
math.inf in band. Exceptions are reserved for malformed inputs and for
conditions that make the requested computation meaningless.
"""

from __future__ import annotations


class ApweightsError(Exception):
    """Base class for all package-specific errors."""


class ParseError(ApweightsError, ValueError):
    """A serialized artifact (weight, polynomial, certificate, grid) is malformed."""


class DimensionMismatch(ApweightsError, ValueError):
    """Ambient dimensions of two objects disagree."""


class ZeroInfimum(ApweightsError, ArithmeticError):
    """The node minimum of a weight is exactly zero, so mean/inf is undefined."""


class NotContained(ApweightsError, ValueError):
    """The inner cube of a doubling pair is not contained in the outer cube."""


class ZeroMass(ApweightsError, ArithmeticError):
    """A weight integrates to zero at quadrature scale where a positive mass is required."""


class NeverFinite(ApweightsError, ArithmeticError):
    """No exponent up to the bisection cap gives a finite, stable quotient."""


class ZeroDivisor(ApweightsError, ArithmeticError):
    """|P(xi0 + m)| vanishes exactly at a lattice point of the window."""

    def __init__(self, xi0, m):
        self.xi0 = tuple(float(c) for c in xi0)
        self.m = tuple(int(c) for c in m)
        super().__init__(f"|P(xi0 + m)| = 0 at m = {self.m} for xi0 = {self.xi0}")


class AllShiftsBad(ApweightsError, ArithmeticError):
    """Every scanned shift candidate hits a zero divisor on the window."""


class SmallDivisorBreach(ApweightsError, ArithmeticError):
    """A resolved mode with nonzero data has |P(xi0 + m)| below the floor.

    Carries the offending modes so callers can report exactly which
    frequencies break the certificate.
    """

    def __init__(self, modes, divisors, eps_min):
        self.modes = [tuple(int(c) for c in m) for m in modes]
        self.divisors = [float(d) for d in divisors]
        self.eps_min = float(eps_min)
        shown = ", ".join(f"m={m} |P|={d:.3e}" for m, d in zip(self.modes[:8], self.divisors[:8]))
        more = "" if len(self.modes) <= 8 else f" (+{len(self.modes) - 8} more)"
        super().__init__(
            f"{len(self.modes)} mode(s) below divisor floor {self.eps_min:.3e}: {shown}{more}"
        )


class WrongDomainTag(ApweightsError, ValueError):
    """A grid function is in the wrong domain (physical vs frequency) for the operation."""
