"""Vectorized certified arithmetic for bulk prime sums and products.

Elementwise operations mirror the scalar Interval class: compute in round-to-
nearest, then nudge endpoints outward with np.nextafter (one step for exact
IEEE operations, four for libm kernels, which are accurate to a couple of
ulps on every platform we target; the fuzz suite cross-checks samples against
mpmath).

Reductions use a priori floating-point error bounds instead of per-add
rounding control: for any summation order of n doubles,

    |fl(sum x) - sum x| <= n * u * sum|x| / (1 - n*u),   u = 2^-53,

and the analogous relative bound for products of positive factors.  The
reduction helpers inflate by these bounds and round outward, so the returned
scalar Interval contains the exact sum/product of the exact elementwise
values.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import NonPositiveFactor
from .interval import Interval

_U = 2.0**-53
_INF = math.inf


def _nudge(arr: np.ndarray, direction: float, steps: int) -> np.ndarray:
    out = arr
    for _ in range(steps):
        out = np.nextafter(out, direction)
    return out


class ArrayInterval:
    """Parallel arrays of lower/upper bounds, one interval per element."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: np.ndarray, hi: np.ndarray):
        self.lo = lo
        self.hi = hi

    @staticmethod
    def exact(values: np.ndarray) -> "ArrayInterval":
        """Wrap values that are exactly representable (integers < 2^53)."""
        v = np.asarray(values, dtype=np.float64)
        return ArrayInterval(v, v.copy())

    @staticmethod
    def of(x) -> "ArrayInterval":
        if isinstance(x, ArrayInterval):
            return x
        if isinstance(x, Interval):
            return ArrayInterval(np.float64(x.lo), np.float64(x.hi))
        return ArrayInterval(np.float64(x), np.float64(x))

    @property
    def size(self) -> int:
        return int(np.size(self.lo))

    def __add__(self, other) -> "ArrayInterval":
        o = ArrayInterval.of(other)
        return ArrayInterval(
            _nudge(self.lo + o.lo, -_INF, 1), _nudge(self.hi + o.hi, _INF, 1)
        )

    __radd__ = __add__

    def __neg__(self) -> "ArrayInterval":
        return ArrayInterval(-self.hi, -self.lo)

    def __sub__(self, other) -> "ArrayInterval":
        o = ArrayInterval.of(other)
        return ArrayInterval(
            _nudge(self.lo - o.hi, -_INF, 1), _nudge(self.hi - o.lo, _INF, 1)
        )

    def __rsub__(self, other) -> "ArrayInterval":
        return ArrayInterval.of(other) - self

    def __mul__(self, other) -> "ArrayInterval":
        o = ArrayInterval.of(other)
        c1 = self.lo * o.lo
        c2 = self.lo * o.hi
        c3 = self.hi * o.lo
        c4 = self.hi * o.hi
        lo = np.minimum(np.minimum(c1, c2), np.minimum(c3, c4))
        hi = np.maximum(np.maximum(c1, c2), np.maximum(c3, c4))
        return ArrayInterval(_nudge(lo, -_INF, 1), _nudge(hi, _INF, 1))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ArrayInterval":
        o = ArrayInterval.of(other)
        if not (np.all(o.lo > 0.0) or np.all(o.hi < 0.0)):
            raise NonPositiveFactor("vector divisor not certifiably sign-definite")
        c1 = self.lo / o.lo
        c2 = self.lo / o.hi
        c3 = self.hi / o.lo
        c4 = self.hi / o.hi
        lo = np.minimum(np.minimum(c1, c2), np.minimum(c3, c4))
        hi = np.maximum(np.maximum(c1, c2), np.maximum(c3, c4))
        return ArrayInterval(_nudge(lo, -_INF, 1), _nudge(hi, _INF, 1))

    def __rtruediv__(self, other) -> "ArrayInterval":
        return ArrayInterval.of(other) / self

    def abs(self) -> "ArrayInterval":
        lo = np.where(self.lo > 0.0, self.lo, np.where(self.hi < 0.0, -self.hi, 0.0))
        hi = np.maximum(np.abs(self.lo), np.abs(self.hi))
        return ArrayInterval(lo, hi)

    def log(self) -> "ArrayInterval":
        # monotone; libm kernel widened by 4 ulps
        return ArrayInterval(
            _nudge(np.log(self.lo), -_INF, 4), _nudge(np.log(self.hi), _INF, 4)
        )

    def exp(self) -> "ArrayInterval":
        lo = np.maximum(_nudge(np.exp(self.lo), -_INF, 4), 0.0)
        return ArrayInterval(lo, _nudge(np.exp(self.hi), _INF, 4))

    def sqrt(self) -> "ArrayInterval":
        # IEEE-exact kernel, one nudge suffices
        return ArrayInterval(
            _nudge(np.sqrt(self.lo), -_INF, 1), _nudge(np.sqrt(self.hi), _INF, 1)
        )

    def pow_const(self, r) -> "ArrayInterval":
        """x**r for positive x via exp(r log x); r an Interval or number."""
        return (ArrayInterval.of(Interval.of(r)) * self.log()).exp()


def sum_enclosure(ai: ArrayInterval) -> Interval:
    """Certified enclosure of the sum of an ArrayInterval's elements."""
    n = ai.size
    if n == 0:
        return Interval(0.0, 0.0)
    slo = float(np.sum(ai.lo))
    shi = float(np.sum(ai.hi))
    amax = max(float(np.sum(np.abs(ai.lo))), float(np.sum(np.abs(ai.hi))))
    err = (n * _U * amax) * 1.01 + 1e-307
    return Interval(
        math.nextafter(slo - err, -_INF), math.nextafter(shi + err, _INF)
    )


def prod_enclosure(ai: ArrayInterval) -> Interval:
    """Certified enclosure of the product of certifiably positive elements."""
    n = ai.size
    if n == 0:
        return Interval(1.0, 1.0)
    if not np.all(ai.lo > 0.0):
        raise NonPositiveFactor("product element not certifiably positive")
    plo = float(np.prod(ai.lo))
    phi = float(np.prod(ai.hi))
    if not (math.isfinite(plo) and math.isfinite(phi)):
        raise NonPositiveFactor("product overflowed")
    rel = (n * _U) * 1.01
    return Interval(
        math.nextafter(plo * (1.0 - rel), -_INF),
        math.nextafter(phi * (1.0 + rel), _INF),
    )


def cumsum_enclosure(ai: ArrayInterval) -> ArrayInterval:
    """Certified running-sum enclosures (kth element covers sum of x[0..k]).

    Uses the same a priori bound as sum_enclosure with the prefix length as n.
    """
    clo = np.cumsum(ai.lo)
    chi = np.cumsum(ai.hi)
    cabs = np.maximum(np.cumsum(np.abs(ai.lo)), np.cumsum(np.abs(ai.hi)))
    k = np.arange(1, ai.size + 1, dtype=np.float64)
    err = (k * _U * cabs) * 1.01 + 1e-307
    return ArrayInterval(
        _nudge(clo - err, -_INF, 1), _nudge(chi + err, _INF, 1)
    )
