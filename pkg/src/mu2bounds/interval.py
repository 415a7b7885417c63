"""Directed-rounding interval arithmetic on binary64 endpoints.

Outward rounding is implemented by next-representable nudging: each endpoint
is computed with round-to-nearest and then pushed one step toward the
appropriate infinity with ``math.nextafter``.  Since a correctly rounded
result differs from the exact value by strictly less than one ulp, one nudge
is enough for +, -, *, /, sqrt.  Transcendental kernels (exp, log, pow) are
assumed accurate to <= 1 ulp and are widened by two nudges per endpoint;
the containment fuzz suite checks both regimes against an extended-precision
reference.

Decimal literals are converted through exact rational comparison, never via a
float round-trip, so quoted constants keep their provenance bit-safe.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import (
    DivisionByZeroInterval,
    DomainError,
    MalformedInterval,
    MaxAmbiguous,
)

_INF = math.inf

IntervalLike = Union["Interval", int, float, Fraction, str]


def _down(x: float) -> float:
    return math.nextafter(x, -_INF)


def _up(x: float) -> float:
    return math.nextafter(x, _INF)


def _down2(x: float) -> float:
    return _down(_down(x))


def _up2(x: float) -> float:
    return _up(_up(x))


class Interval:
    """Closed interval [lo, hi] with outward-rounded float endpoints.

    The invariant maintained everywhere: for any supported operation and any
    points x in X, y in Y, the exact real x*y lies in X*Y.
    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo: float, hi: float):
        lo = float(lo)
        hi = float(hi)
        if math.isnan(lo) or math.isnan(hi):
            raise MalformedInterval("NaN endpoint")
        if lo > hi:
            raise MalformedInterval(f"lo={lo!r} > hi={hi!r}")
        self.lo = lo
        self.hi = hi

    # ------------------------------------------------------------------
    # construction

    @staticmethod
    def point(x: float) -> "Interval":
        return Interval(x, x)

    @staticmethod
    def from_fraction(fr: Fraction) -> "Interval":
        """Tightest interval containing an exact rational."""
        f = float(fr)  # correctly rounded for arbitrary-size Fraction
        if math.isinf(f):
            return Interval(f, f)
        ff = Fraction(f)
        if ff == fr:
            return Interval(f, f)
        if ff < fr:
            return Interval(f, _up(f))
        return Interval(_down(f), f)

    @staticmethod
    def of(value: IntervalLike) -> "Interval":
        if isinstance(value, Interval):
            return value
        if isinstance(value, bool):
            raise MalformedInterval("bool is not a numeric endpoint")
        if isinstance(value, float):
            return Interval(value, value)
        if isinstance(value, Fraction):
            return Interval.from_fraction(value)
        if isinstance(value, str):
            return Interval.from_fraction(Fraction(value.strip()))
        try:
            ivalue = operator.index(value)  # int and numpy integers
        except TypeError:
            raise MalformedInterval(f"cannot build interval from {value!r}") from None
        if abs(ivalue) <= 2**53:
            return Interval(float(ivalue), float(ivalue))
        return Interval.from_fraction(Fraction(ivalue))

    # ------------------------------------------------------------------
    # predicates and accessors

    def width(self) -> float:
        return _up(self.hi - self.lo)

    def mid(self) -> float:
        if math.isinf(self.lo) or math.isinf(self.hi):
            return self.lo if self.lo == self.hi else 0.0
        return self.lo + (self.hi - self.lo) / 2.0

    def is_point(self) -> bool:
        return self.lo == self.hi

    def is_finite(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    def contains(self, value) -> bool:
        if isinstance(value, Fraction):
            return Fraction(self.lo) <= value <= Fraction(self.hi)
        v = float(value)
        return self.lo <= v <= self.hi

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def strictly_positive(self) -> bool:
        return self.lo > 0.0

    def strictly_negative(self) -> bool:
        return self.hi < 0.0

    def certainly_lt(self, other: IntervalLike) -> bool:
        o = Interval.of(other)
        return self.hi < o.lo

    def certainly_le(self, other: IntervalLike) -> bool:
        o = Interval.of(other)
        return self.hi <= o.lo

    def certainly_gt(self, other: IntervalLike) -> bool:
        return Interval.of(other).certainly_lt(self)

    def certainly_ge(self, other: IntervalLike) -> bool:
        return Interval.of(other).certainly_le(self)

    # ------------------------------------------------------------------
    # arithmetic

    def __add__(self, other: IntervalLike) -> "Interval":
        o = Interval.of(other)
        return Interval(_down(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other: IntervalLike) -> "Interval":
        o = Interval.of(other)
        return Interval(_down(self.lo - o.hi), _up(self.hi - o.lo))

    def __rsub__(self, other: IntervalLike) -> "Interval":
        return Interval.of(other) - self

    def __mul__(self, other: IntervalLike) -> "Interval":
        o = Interval.of(other)
        cands = (
            _mul1(self.lo, o.lo),
            _mul1(self.lo, o.hi),
            _mul1(self.hi, o.lo),
            _mul1(self.hi, o.hi),
        )
        return Interval(_down(min(cands)), _up(max(cands)))

    __rmul__ = __mul__

    def __truediv__(self, other: IntervalLike) -> "Interval":
        o = Interval.of(other)
        if o.lo <= 0.0 <= o.hi:
            raise DivisionByZeroInterval(f"0 in divisor {o!r}")
        cands = (
            self.lo / o.lo,
            self.lo / o.hi,
            self.hi / o.lo,
            self.hi / o.hi,
        )
        return Interval(_down(min(cands)), _up(max(cands)))

    def __rtruediv__(self, other: IntervalLike) -> "Interval":
        return Interval.of(other) / self

    def __abs__(self) -> "Interval":
        if self.lo >= 0.0:
            return self
        if self.hi <= 0.0:
            return -self
        return Interval(0.0, max(-self.lo, self.hi))

    def square(self) -> "Interval":
        # dependent square: sharper than self * self across zero
        a = abs(self)
        return Interval(_down(a.lo * a.lo), _up(a.hi * a.hi))

    def __pow__(self, n: int) -> "Interval":
        if not isinstance(n, int):
            raise TypeError("use pow_interval for non-integer exponents")
        if n < 0:
            return Interval(1.0, 1.0) / self.__pow__(-n)
        result = Interval(1.0, 1.0)
        base = self
        k = n
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base.square()
        return result

    def hull(self, other: IntervalLike) -> "Interval":
        o = Interval.of(other)
        return Interval(min(self.lo, o.lo), max(self.hi, o.hi))

    def intersect(self, other: "Interval") -> "Interval":
        if not self.intersects(other):
            raise MalformedInterval(f"disjoint intervals {self!r}, {other!r}")
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    # ------------------------------------------------------------------
    # elementary functions

    def sqrt(self) -> "Interval":
        if self.lo < 0.0:
            raise DomainError(f"sqrt of {self!r}")
        return Interval(_down(math.sqrt(self.lo)), _up(math.sqrt(self.hi)))

    def exp(self) -> "Interval":
        lo = _down2(_exp1(self.lo))
        hi = _exp1(self.hi)
        hi = _up2(hi) if math.isfinite(hi) else hi
        return Interval(max(lo, 0.0), hi)

    def log(self) -> "Interval":
        if self.lo <= 0.0:
            raise DomainError(f"log of {self!r}")
        return Interval(_down2(math.log(self.lo)), _up2(math.log(self.hi)))

    def pow_interval(self, r: IntervalLike) -> "Interval":
        """x**r for real interval exponent, via exp(r log x); needs x.lo > 0."""
        r = Interval.of(r)
        if r.is_point() and float(r.lo).is_integer() and abs(r.lo) <= 512:
            return self.__pow__(int(r.lo))
        if self.lo <= 0.0:
            raise DomainError(f"pow of non-positive base {self!r}")
        return (r * self.log()).exp()

    def recip(self) -> "Interval":
        return Interval(1.0, 1.0) / self

    # ------------------------------------------------------------------

    def __repr__(self) -> str:
        return f"[{self.lo!r}, {self.hi!r}]"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Interval)
            and self.lo == other.lo
            and self.hi == other.hi
        )

    def __hash__(self) -> int:
        return hash((self.lo, self.hi))


def _mul1(a: float, b: float) -> float:
    # IEEE inf * 0 -> nan; the sound replacement for interval corners is 0
    r = a * b
    if math.isnan(r):
        return 0.0
    return r


def _exp1(x: float) -> float:
    # math.exp raises instead of returning the IEEE overflow result
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def make_interval(lo: str, hi: str) -> Interval:
    """Build an interval from decimal literals with exact outward rounding.

    The returned interval contains [lo, hi] as exact reals.  Raises
    MalformedInterval when lo > hi as rationals.
    """
    flo = Fraction(str(lo).strip())
    fhi = Fraction(str(hi).strip())
    if flo > fhi:
        raise MalformedInterval(f"{lo} > {hi}")
    a = Interval.from_fraction(flo)
    b = Interval.from_fraction(fhi)
    return Interval(a.lo, b.hi)


def arithmetic(a: Interval, b: Interval, kind: str) -> Interval:
    """Dispatch table form of the four basic operations."""
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        return a / b
    raise ValueError(f"unknown arithmetic kind {kind!r}")


def elementary(x: Interval, fn: str, r: IntervalLike | None = None) -> Interval:
    """Dispatch table form of the elementary functions."""
    if fn == "exp":
        return x.exp()
    if fn == "log":
        return x.log()
    if fn == "sqrt":
        return x.sqrt()
    if fn == "pow":
        if r is None:
            raise ValueError("pow requires an exponent interval")
        return x.pow_interval(r)
    raise ValueError(f"unknown elementary function {fn!r}")


def imax(*items: IntervalLike) -> Interval:
    """Interval enclosure of max(x1, ..., xn) over all choices xi in Xi."""
    ivs = [Interval.of(i) for i in items]
    return Interval(max(i.lo for i in ivs), max(i.hi for i in ivs))


def imin(*items: IntervalLike) -> Interval:
    ivs = [Interval.of(i) for i in items]
    return Interval(min(i.lo for i in ivs), min(i.hi for i in ivs))


def certified_max(a: Interval, b: Interval) -> Interval:
    """max(a, b) when one argument certifiably dominates; else MaxAmbiguous.

    Use imax when a hull is acceptable; this strict form is for proof steps
    that must know *which* branch attains the maximum.
    """
    if a.certainly_ge(b):
        return a
    if b.certainly_ge(a):
        return b
    raise MaxAmbiguous(f"cannot order {a!r} and {b!r}")


def decimal_bound(x: Interval, digits: int, direction: str) -> str:
    """Safe d-decimal rendering of an interval endpoint.

    ``upper`` returns the smallest decimal with ``digits`` fractional digits
    that is >= x.hi; ``lower`` the largest such decimal <= x.lo.  Computed by
    exact rational ceiling/floor, so the printed value never narrows the
    interval.
    """
    if digits < 0:
        raise ValueError("digits must be >= 0")
    if direction == "upper":
        endpoint = x.hi
    elif direction == "lower":
        endpoint = x.lo
    else:
        raise ValueError(f"direction must be 'upper' or 'lower', got {direction!r}")
    if not math.isfinite(endpoint):
        raise ValueError(f"cannot render non-finite endpoint {endpoint!r}")
    scaled = Fraction(endpoint) * 10**digits
    if direction == "upper":
        units = -((-scaled.numerator) // scaled.denominator)  # ceil
    else:
        units = scaled.numerator // scaled.denominator  # floor
    sign = "-" if units < 0 else ""
    units = abs(units)
    if digits == 0:
        return f"{sign}{units}"
    whole, frac = divmod(units, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def interval_to_json(x: Interval) -> dict:
    """JSON form {"lo": ..., "hi": ...}; 17 decimals, outward, never narrowing."""
    return {
        "lo": decimal_bound(x, 17, "lower"),
        "hi": decimal_bound(x, 17, "upper"),
    }


@dataclass(frozen=True)
class NamedConstant:
    name: str
    value: Interval
    provenance: str


# Euler-Mascheroni constant, 40 decimal digits.
_GAMMA_DIGITS = "0.5772156649015328606065120900824024310421"
GAMMA = NamedConstant(
    name="GAMMA",
    value=make_interval(_GAMMA_DIGITS, _GAMMA_DIGITS),
    provenance="Euler-Mascheroni constant, 40-digit decimal",
)

_PI_DIGITS = "3.1415926535897932384626433832795028841972"
PI = NamedConstant(
    name="PI",
    value=make_interval(_PI_DIGITS, _PI_DIGITS),
    provenance="pi, 40-digit decimal",
)

SQRT2 = Interval.of(2).sqrt()
