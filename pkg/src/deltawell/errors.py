"""Shared exception types for numerical failure modes.

Domain violations (bad arguments) raise plain ValueError throughout the
package; the classes here mark *runtime* numerical trouble that a caller
may want to catch and route around (e.g. fall back from a series to a
quadrature).
"""


class NumericsError(ArithmeticError):
    """Base class for flagged numerical failures."""


class PrecisionLossError(NumericsError):
    """A result could not be computed to its advertised accuracy.

    Raised instead of silently returning a wrong answer, e.g. when a
    series suffers catastrophic cancellation beyond its condition bound.
    """


class ConvergenceError(NumericsError):
    """An iterative scheme (quadrature, acceleration ladder) did not converge."""
