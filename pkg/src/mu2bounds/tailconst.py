"""All-X>0 partial-power-sum estimates and their empty-sum tail constants.

For X >= 1 the classical bounds give

    |sum_{n<=X} 1/n - log X - gamma|        <= gamma / X       (alpha = 1)
    |sum_{n<=X} n^-a - zeta(a) + X^{1-a}/(a-1)| <= 1 / X^a     (a != 1)

and for 0 < X < 1 the sums are empty, so the constant must also dominate the
weighted main term on (0, 1).  The closed forms for that empty branch are the
two max-candidates below (critical point plus boundary value).

For alpha != 1 the crude X >= 1 envelope X^{delta-alpha} <= 1 would force a
floor of 1 on the constant.  When the empty-branch candidates allow a smaller
constant we instead certify the X >= 1 branch directly: piecewise interval
verification of X^delta |residual| over [1, X1] (the residual is an explicit
function between consecutive integers), plus the envelope for X > X1.  The
result is a certified constant that is also sharp, which the oracle grid
tests require.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import AmbiguousComparison, DeltaOutOfRange
from .interval import GAMMA, Interval, imax
from .zeta import zeta_value

_ONE = Interval(1.0, 1.0)

# piece cap for the X >= 1 verification; beyond this fall back to the floor 1
_MAX_PIECES = 50_000


def _is_boundary_delta(alpha: Interval, delta: Interval) -> bool:
    # exact rational equality: interval subtraction would nudge the endpoints
    return (
        alpha.is_point()
        and delta.is_point()
        and alpha.lo > 1.0
        and Fraction(delta.lo) == Fraction(alpha.lo) - 1
    )


@dataclass(frozen=True)
class DeltaConstant:
    alpha: Interval
    delta: Interval
    value: Interval


def _require_delta_range(alpha: Interval, delta: Interval) -> None:
    lowbar = imax(Interval(0.0, 0.0), alpha - 1)
    if not lowbar.certainly_lt(delta):
        if _is_boundary_delta(alpha, delta):
            return  # closed boundary delta = alpha - 1 > 0, handled specially
        if delta.certainly_le(lowbar):
            raise DeltaOutOfRange(f"delta={delta!r} <= max(0, alpha-1)")
        raise AmbiguousComparison(
            f"cannot certify max(0, alpha-1) < delta for alpha={alpha!r}, delta={delta!r}"
        )
    if delta.certainly_le(alpha) or delta == alpha:
        return
    if alpha.certainly_lt(delta):
        raise DeltaOutOfRange(f"delta={delta!r} > alpha={alpha!r}")
    raise AmbiguousComparison(
        f"cannot certify delta <= alpha for alpha={alpha!r}, delta={delta!r}"
    )


def delta_constant(alpha, delta) -> DeltaConstant:
    """Certified constant D with |sum_{n<=X} n^-alpha - main(X)| <= D/X^delta, X > 0."""
    alpha = Interval.of(alpha)
    delta = Interval.of(delta)
    _require_delta_range(alpha, delta)

    if alpha.is_point() and alpha.lo == 1.0:
        if not delta.certainly_le(_ONE):
            raise DeltaOutOfRange("alpha = 1 requires 0 < delta <= 1")
        gamma = GAMMA.value
        crit = _ONE / (delta * (gamma * delta + 1).exp())
        return DeltaConstant(alpha, delta, imax(gamma, crit))

    if alpha.contains(1.0):
        raise AmbiguousComparison(f"alpha={alpha!r} straddles 1")

    if _is_boundary_delta(alpha, delta):
        # delta = alpha - 1 > 0: the empty branch is monotone between its
        # boundary value and its limit 1/(alpha-1); the X >= 1 envelope is 1
        z = zeta_value(alpha)
        inv = _ONE / (alpha - 1)
        return DeltaConstant(alpha, delta, imax(z - inv, inv, _ONE))

    if alpha.is_point() and delta == alpha:
        return DeltaConstant(alpha, delta, _ONE)
    if not delta.certainly_lt(alpha):
        raise AmbiguousComparison(
            f"cannot separate delta={delta!r} from alpha={alpha!r}"
        )

    z = zeta_value(alpha)
    am1 = alpha - 1
    # interior critical point of the empty branch, in closed form
    ratio = (delta - alpha + 1) / abs(z * am1)
    crit = (
        delta.pow_interval(-delta) * ratio.pow_interval(delta - alpha + 1)
    ).pow_interval(_ONE / am1)
    boundary = z - _ONE / am1
    empty = imax(crit, boundary)

    if empty.lo >= 1.0:
        # the floor 1 from the X >= 1 envelope never binds
        return DeltaConstant(alpha, delta, empty)

    xbranch = _certified_xgeq1_bound(alpha, delta, empty)
    return DeltaConstant(alpha, delta, imax(empty, xbranch))


def _certified_xgeq1_bound(
    alpha: Interval, delta: Interval, target: Interval
) -> Interval:
    """Certified bound for sup_{X>=1} X^delta |sum_{n<=X} n^-alpha - main(X)|.

    On each integer piece [n, n+1] the partial sum is the constant S_n, so the
    weighted residual W(X) = X^delta (S_n - zeta(alpha)) + X^{delta+1-alpha}/(alpha-1)
    attains its piece maximum at an endpoint or at the closed-form critical
    point X* with X*^{alpha-1} = -(delta-alpha+1) / (delta (alpha-1)(S_n - zeta)).
    For X beyond the verified range, |W| <= X^{delta-alpha} <= target.
    Returns the prose floor {1} when the verified range would be too long.
    """
    z = zeta_value(alpha)
    expo = delta - alpha  # certifiably negative here
    # first X with X^expo <= target.lo
    if target.lo <= 0.0 or expo.hi >= 0.0:
        return _ONE
    x1_iv = Interval(target.lo, target.lo).pow_interval(_ONE / expo)
    if not math.isfinite(x1_iv.hi) or x1_iv.hi > _MAX_PIECES:
        return _ONE
    x1 = max(2, int(math.ceil(x1_iv.hi)) + 1)
    tail_env = Interval.of(x1).pow_interval(expo)

    best = tail_env
    partial = Interval(0.0, 0.0)
    shift = delta + 1 - alpha
    for n in range(1, x1 + 1):
        partial = partial + Interval.of(n).pow_interval(-alpha)
        a = Interval.of(n)
        b = Interval.of(n + 1)
        drift = partial - z

        def weighted(x: Interval) -> Interval:
            return abs(
                x.pow_interval(delta) * drift
                + x.pow_interval(shift) / (alpha - 1)
            )

        best = imax(best, weighted(a), weighted(b))
        piece = Interval(a.lo, b.hi)
        if drift.contains(0.0):
            # critical-point formula unusable; enclose W over the whole piece
            best = imax(best, weighted(piece))
            continue
        rho = -(delta - alpha + 1) / (delta * (alpha - 1) * drift)
        if rho.hi > 0.0:
            rho = Interval(max(rho.lo, 1e-300), rho.hi)
            xstar = rho.pow_interval(_ONE / (alpha - 1))
            if xstar.intersects(piece):
                best = imax(best, weighted(xstar.intersect(piece)))
    return best


def powersum_estimate(X, alpha, delta) -> tuple[Interval, Interval]:
    """Main-term value and certified error bound for sum_{n<=X} n^-alpha at X.

    Returns (main, bound) with the guarantee that the exact partial sum lies
    in main +- bound; valid for every X > 0 including the empty range.
    """
    alpha = Interval.of(alpha)
    delta = Interval.of(delta)
    dc = delta_constant(alpha, delta)
    xv = Interval.of(X)
    if not xv.strictly_positive():
        raise DeltaOutOfRange("X must be positive")
    if alpha.is_point() and alpha.lo == 1.0:
        main = xv.log() + GAMMA.value
    else:
        main = zeta_value(alpha) - xv.pow_interval(_ONE - alpha) / (alpha - 1)
    bound = dc.value * xv.pow_interval(-delta)
    return main, bound


def validate_delta_for_theorem(alpha, beta, delta) -> bool:
    """Certified check of max{0, alpha-1} < delta < min{beta-1, alpha-1/2}.

    Point intervals are compared exactly as rationals, so closed boundaries
    (e.g. delta = alpha - 1/2) are decided rather than ambiguous.
    """
    alpha = Interval.of(alpha)
    beta = Interval.of(beta)
    delta = Interval.of(delta)
    if alpha.is_point() and beta.is_point() and delta.is_point():
        a = Fraction(alpha.lo)
        b = Fraction(beta.lo)
        d = Fraction(delta.lo)
        return max(Fraction(0), a - 1) < d < min(b - 1, a - Fraction(1, 2))
    lowbar = imax(Interval(0.0, 0.0), alpha - 1)
    upbar_a = beta - 1
    upbar_b = alpha - Interval.of(0.5)

    def strict_lt(a: Interval, b: Interval) -> bool | None:
        if a.certainly_lt(b):
            return True
        if b.certainly_le(a):
            return False
        return None

    checks = (
        strict_lt(lowbar, delta),
        strict_lt(delta, upbar_a),
        strict_lt(delta, upbar_b),
    )
    if any(c is False for c in checks):
        return False
    if all(c is True for c in checks):
        return True
    raise AmbiguousComparison(
        f"delta window undecidable for alpha={alpha!r}, beta={beta!r}, delta={delta!r}"
    )
