"""Verified suprema of the weighted residual functionals.

The residual of sum_{l <= X, (l,v)=1} mu^2(l)/l against its logarithmic main
term is piecewise of the form c - a log X between consecutive integers, with
the step value held as an exact rational.  On each piece [n, n+1) the weighted
functional sqrt(X) |c - a log X| attains its supremum at an endpoint or at the
closed-form interior critical point log X* = c/a - 2; all three are evaluated
in intervals and hulled.  Left-limits at jumps are evaluated with the pre-jump
step value, which is where the extrema of these residuals live (the verified
bound over [1, 1573] is approached as X -> 3^-).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

import gmpy2

from .errors import AlphaOutOfRange, LimitExceeded, MaxAmbiguous
from .eulerprod import mathfrak_b
from .interval import PI, Interval, imax
from .primes import kappa, kappa_s, phi_s, squarefree_table
from .zeta import zeta_value

_ONE = Interval(1.0, 1.0)

_MAX_SUP_RANGE = 10**5


@dataclass(frozen=True)
class SupResult:
    """Certified bracket for a supremum.

    ``bound`` is a certified upper bound (its .hi dominates the true sup);
    ``attained_lower`` is the functional evaluated at the witness, so its .lo
    certifies how close the bound is to being achieved.
    """

    bound: Interval
    witness_X: Interval
    attained_lower: Interval
    witness_piece: tuple[int, int]


def _mpq_interval(x: "gmpy2.mpq") -> Interval:
    return Interval.from_fraction(Fraction(int(x.numerator), int(x.denominator)))


def _main_coefficient(v: int) -> Interval:
    """a = 6 v / (kappa(v) pi^2)."""
    kap = kappa(v)
    return Interval.of(6 * v) / (Interval.from_fraction(kap) * PI.value.square())


_lock = threading.Lock()
_sup_cache: dict[tuple[int, int, int], SupResult] = {}


def verified_sup_weighted_residual(
    v: int, X_max: int, prime_limit: int = 10**7, threads: int = 1
) -> SupResult:
    """Certified sup over [1, X_max] of sqrt(X) |S_v(X) - a_v (log X + b_v)|.

    S_v is the exact step function sum_{l <= X, (l,v)=1} mu^2(l)/l, held as
    exact rationals; a_v = 6v/(kappa(v) pi^2) and b_v is the certified
    logarithmic constant for the coprimality class of v.
    """
    if v not in (1, 2):
        raise ValueError("v must be 1 or 2")
    if X_max > _MAX_SUP_RANGE:
        raise LimitExceeded(f"X_max={X_max} above {_MAX_SUP_RANGE}")
    if X_max < 1:
        raise ValueError("X_max must be >= 1")
    key = (v, X_max, prime_limit)
    with _lock:
        if key in _sup_cache:
            return _sup_cache[key]

    a = _main_coefficient(v)
    b = mathfrak_b(v, prime_limit, threads=threads)
    ab = a * b
    sqf = squarefree_table(X_max)

    step = gmpy2.mpq(0)
    best = Interval(0.0, 0.0)
    best_piece = (1, 1)
    best_x = _ONE
    best_val = Interval(0.0, 0.0)

    def weighted(x: Interval, c: Interval) -> Interval:
        return x.sqrt() * abs(c - a * x.log())

    for n in range(1, X_max + 1):
        if bool(sqf[n]) and (v == 1 or n % v):
            step += gmpy2.mpq(1, n)
        s_iv = _mpq_interval(step)
        c = s_iv - ab
        lo_x = Interval.of(n)
        hi_x = Interval.of(min(n + 1, X_max)) if n < X_max else lo_x
        cands: list[tuple[Interval, Interval]] = [(lo_x, weighted(lo_x, c))]
        if n < X_max:
            cands.append((hi_x, weighted(hi_x, c)))
            piece = Interval(lo_x.lo, hi_x.hi)
            xstar = (c / a - 2).exp()
            if xstar.intersects(piece):
                clipped = xstar.intersect(piece)
                cands.append((clipped, weighted(clipped, c)))
        for x_iv, val in cands:
            best = imax(best, val)
            if val.hi >= best.hi:
                best_piece = (n, min(n + 1, X_max))
                best_x = x_iv
                best_val = val

    out = SupResult(
        bound=best,
        witness_X=best_x,
        attained_lower=best_val,
        witness_piece=best_piece,
    )
    with _lock:
        _sup_cache[key] = out
    return out


def empty_range_sup_log(v: int, prime_limit: int = 10**7) -> Interval:
    """sup over 0 < X < 1 of sqrt(X) |a_v (log X + b_v)| = a_v b_v.

    The proof reduces to max{|t(1)|, |t(y0)|} with the critical value
    t(y0) = 2 a_v e^{-1-b_v/2}; the boundary value wins, and that comparison
    is re-verified here in intervals (MaxAmbiguous if it cannot be certified).
    """
    if v not in (1, 2):
        raise ValueError("v must be 1 or 2")
    a = _main_coefficient(v)
    b = mathfrak_b(v, prime_limit)
    t1 = a * b
    ty0 = 2 * a * (-(_ONE + b / 2)).exp()
    if not t1.certainly_ge(ty0):
        raise MaxAmbiguous(f"cannot certify boundary dominance for v={v}")
    return t1


def empty_range_sup_power(alpha, v: int) -> Interval:
    """Empty-range sup of the power-weighted residual, scaled by phi_1/2(v)/sqrt(v).

    Returns the enclosure of max{|g(1)|, |g(x0)|} in the closed forms of the
    critical-constant lemma: the zeta-ratio-minus-pole candidate and the
    interior critical-point candidate.
    """
    if v not in (1, 2):
        raise ValueError("v must be 1 or 2")
    alpha = Interval.of(alpha)
    if not alpha.certainly_gt(Interval.of(0.5)):
        raise AlphaOutOfRange(f"alpha={alpha!r} must exceed 1/2")
    if alpha.contains(1.0):
        raise AlphaOutOfRange(f"alpha={alpha!r} must avoid 1")
    scale = phi_s(v, Interval.of(0.5)) / Interval.of(v).sqrt()
    z = zeta_value(alpha)
    z2 = zeta_value(2 * alpha)
    kap = Interval.from_fraction(kappa(v))
    kap_a = kappa_s(v, alpha)
    pi2 = PI.value.square()
    am1 = alpha - 1
    amh = alpha - Interval.of(0.5)

    va = Interval.of(v).pow_interval(alpha)
    cand1 = scale * abs(va / kap_a * (z / z2) - Interval.of(v) / kap * 6 / (am1 * pi2))
    inner = (3 * kap_a * z2) / (
        amh * Interval.of(v).pow_interval(am1) * kap * pi2 * abs(z * am1)
    )
    cand2 = scale * (abs(am1) / amh) * inner.pow_interval(2 / am1)
    return imax(cand1, cand2)
