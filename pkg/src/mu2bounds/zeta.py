"""Rigorous zeta values and exact interval partial power sums.

For real alpha > 0, alpha != 1, the Euler-Maclaurin-free enclosure

    zeta(alpha)  in  sum_{n<=N} n^-alpha  +  N^{1-alpha}/(alpha-1)  +  [-N^-alpha, N^-alpha]

is self-contained (no special-function dependency) and converges like
N^-alpha, which at the default N = 10^6 is far below every width target in
this package.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bulk import ArrayInterval, sum_enclosure
from .errors import PoleAtOne
from .interval import Interval

DEFAULT_ZETA_CUTOFF = 10**6

_default_cutoff = DEFAULT_ZETA_CUTOFF

_CHUNK = 1 << 19


def set_default_cutoff(N: int) -> None:
    """Set the partial-sum length used when zeta is evaluated without one."""
    global _default_cutoff
    if N < 2:
        raise ValueError("cutoff must be >= 2")
    _default_cutoff = int(N)


@dataclass(frozen=True)
class ZetaValue:
    alpha: Interval
    value: Interval
    cutoff_N: int


def partial_power_sum(X, alpha) -> Interval:
    """Certified enclosure of sum_{n <= X} n^-alpha; {0} for X < 1."""
    alpha = Interval.of(alpha)
    if isinstance(X, Fraction):
        top = X.numerator // X.denominator if X > 0 else 0
    else:
        if not X > 0:
            return Interval(0.0, 0.0)
        top = int(math.floor(X))
    if top < 1:
        return Interval(0.0, 0.0)
    total = Interval(0.0, 0.0)
    start = 1
    while start <= top:
        end = min(start + _CHUNK - 1, top)
        ns = ArrayInterval.exact(np.arange(start, end + 1, dtype=np.float64))
        if alpha.is_point() and alpha.lo == 1.0:
            terms = 1.0 / ns
        elif alpha.is_point() and alpha.lo == 2.0:
            terms = 1.0 / (ns * ns)
        else:
            terms = (ns.log() * (-alpha)).exp()
        total = total + sum_enclosure(terms)
        start = end + 1
    return total


_memo_lock = threading.Lock()
_memo: dict[tuple[float, float, int], ZetaValue] = {}


def zeta_rigorous(alpha, N: int | None = None) -> ZetaValue:
    """Enclose zeta(alpha) for real alpha > 0 with 1 outside alpha."""
    if N is None:
        N = _default_cutoff
    alpha = Interval.of(alpha)
    if alpha.lo <= 0.0:
        raise PoleAtOne(f"alpha={alpha!r} must be positive")
    if alpha.contains(1.0):
        raise PoleAtOne(f"1 in alpha={alpha!r}")
    if N < 2:
        raise ValueError("N must be >= 2")
    key = (alpha.lo, alpha.hi, N)
    with _memo_lock:
        hit = _memo.get(key)
    if hit is not None:
        return hit
    partial = partial_power_sum(N, alpha)
    nN = Interval.of(N)
    pole = nN.pow_interval(Interval.of(1) - alpha) / (alpha - 1)
    tail = nN.pow_interval(-alpha)
    enclosure = partial + pole + Interval(-tail.hi, tail.hi)
    out = ZetaValue(alpha=alpha, value=enclosure, cutoff_N=N)
    with _memo_lock:
        _memo[key] = out
    return out


def zeta_value(alpha, N: int | None = None) -> Interval:
    return zeta_rigorous(alpha, N).value
