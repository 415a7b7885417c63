"""Exception hierarchy for certified computations.

Every error here means a *certification* failed: either a caller violated a
documented precondition, or interval uncertainty made a required comparison
undecidable.  Nothing in this package silently falls back to an unsound value.
"""


class Mu2BoundsError(Exception):
    """Base class for all package errors."""


class MalformedInterval(Mu2BoundsError):
    """Interval endpoints are out of order or NaN."""


class DivisionByZeroInterval(Mu2BoundsError):
    """Division by an interval containing zero."""


class DomainError(Mu2BoundsError):
    """Elementary function evaluated outside its real domain."""


class AmbiguousComparison(Mu2BoundsError):
    """An interval comparison straddles a branch boundary and cannot be certified."""


class MaxAmbiguous(AmbiguousComparison):
    """A required maximum between two interval values cannot be certified."""


class LimitExceeded(Mu2BoundsError):
    """A sieve or summation limit is above the configured desk-scale cap."""


class PoleAtOne(Mu2BoundsError):
    """zeta evaluation requested on an interval containing the pole at 1."""


class DeltaOutOfRange(Mu2BoundsError):
    """Error exponent delta violates max{0, alpha-1} < delta <= alpha."""


class AlphaOutOfRange(Mu2BoundsError):
    """Exponent alpha outside the range required by the critical-exponent lemmas."""


class BetaGapTooSmall(Mu2BoundsError):
    """beta - alpha <= 1/2: the critical-exponent estimator does not apply."""


class MajorantViolation(Mu2BoundsError):
    """A claimed tail majorant failed on a sieved prime."""


class TailDiverges(Mu2BoundsError):
    """Tail majorant decays with exponent <= 1, so the integer tail diverges."""


class NonPositiveFactor(Mu2BoundsError):
    """An Euler-product factor is not certifiably positive."""


class OutsideAnalyticDomain(Mu2BoundsError):
    """Euler product evaluated outside its certified convergence half-plane."""


class DegenerateFunction(Mu2BoundsError):
    """f(p) = -1 at some prime: the logarithmic main term degenerates."""


class UnsupportedModulus(Mu2BoundsError):
    """Modulus outside the supported comparison table."""


class UnknownConstant(Mu2BoundsError):
    """Constant name not present in the registered catalog."""
