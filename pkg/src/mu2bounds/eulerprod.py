"""Certified prime sums and Euler products with rigorous integer-majorant tails.

Tails over primes beyond the sieve limit are bounded by the corresponding
integer sums: if |term(p)| <= c log(p)^k p^-s for every integer n > P (s > 1),
then the prime tail is at most

    k = 0:   c (P^{1-s}/(s-1) + P^{-s})
    k = 1:   c P^{1-s} (log P/(s-1) + 1/(s-1)^2)

the first by rearranging the zeta partial-sum enclosure, the second by
monotone comparison with the integral.  No prime-counting bounds enter.

Convergence acceleration peels zeta factors: multiplying each product factor
by (1 - p^-s)^e and compensating with zeta(s)^-e makes the residual factors
decay at a strictly larger exponent, so the integer-majorant tail becomes
tight.  Acceleration schedules are data attached to the presets; every
majorant claim is additionally checked on all sieved primes above its
validity point, and a certain violation raises.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np

from .bulk import ArrayInterval, prod_enclosure, sum_enclosure
from .errors import (
    DegenerateFunction,
    LimitExceeded,
    MajorantViolation,
    NonPositiveFactor,
    OutsideAnalyticDomain,
    TailDiverges,
)
from .interval import GAMMA, Interval, imax
from .primes import prime_divisors, primes_up_to
from .zeta import zeta_value

_ONE = Interval(1.0, 1.0)
_CHUNK = 1 << 19

FPrime = Union[Fraction, Interval]


# ----------------------------------------------------------------------
# tail majorants


@dataclass(frozen=True)
class TailComponent:
    """One summand of a tail majorant: c * log(n)^log_power * n^-s."""

    c: Interval
    s: Interval
    log_power: int = 0


def integer_tail_bound(P: int, comp: TailComponent) -> Interval:
    """Upper bound for sum_{n > P} c log(n)^k n^-s, s > 1."""
    if comp.s.lo <= 1.0:
        raise TailDiverges(f"majorant exponent {comp.s!r} not > 1")
    if comp.c.hi == 0.0:
        return Interval(0.0, 0.0)
    pv = Interval.of(P)
    sm1 = comp.s - 1
    if comp.log_power == 0:
        raw = pv.pow_interval(_ONE - comp.s) / sm1 + pv.pow_interval(-comp.s)
    elif comp.log_power == 1:
        raw = pv.pow_interval(_ONE - comp.s) * (
            pv.log() / sm1 + _ONE / sm1.square()
        )
    else:
        raise ValueError("log_power must be 0 or 1")
    bound = comp.c * raw
    return Interval(0.0, bound.hi)


def tail_sum_bound(P: int, comps: Sequence[TailComponent]) -> Interval:
    total = Interval(0.0, 0.0)
    for comp in comps:
        total = total + integer_tail_bound(P, comp)
    return total


def _majorant_values(pv: ArrayInterval, comps: Sequence[TailComponent]) -> ArrayInterval:
    acc: Optional[ArrayInterval] = None
    logs = None
    for comp in comps:
        term = pv.pow_const(-comp.s) * comp.c
        if comp.log_power:
            if logs is None:
                logs = pv.log()
            term = term * logs
        acc = term if acc is None else acc + term
    assert acc is not None
    return acc


# ----------------------------------------------------------------------
# prime term / factor specifications


@dataclass(frozen=True)
class PrimeTermSpec:
    """A summand over primes with a certified tail majorant.

    ``term`` maps an exact prime array (as ArrayInterval) to term enclosures.
    The majorant components bound |term(n)| for every integer n > p0.
    """

    key: str
    term: Callable[[ArrayInterval], ArrayInterval]
    majorant: tuple[TailComponent, ...]
    p0: int = 1000
    nonnegative: bool = True


@dataclass(frozen=True)
class PrimeFactorSpec:
    """An Euler-product factor with a certified majorant for |factor - 1|."""

    key: str
    factor: Callable[[ArrayInterval], ArrayInterval]
    excess: tuple[TailComponent, ...]
    p0: int = 1000
    nonneg_excess: bool = True
    # optional acceleration: factor(p) = residual(p) * prod_i (1 - p^-s_i)^-e_i
    schedule: tuple[tuple[Fraction, int], ...] = ()


_cache_lock = threading.Lock()
_cache: dict[tuple, Interval] = {}


def _chunks(prime_limit: int, q: int, threads: int) -> Iterable[np.ndarray]:
    primes = primes_up_to(prime_limit, threads=threads)
    qps = np.array(prime_divisors(q), dtype=np.int64) if q > 1 else None
    for start in range(0, primes.size, _CHUNK):
        chunk = primes[start : start + _CHUNK]
        if qps is not None and chunk.size and chunk[0] <= qps.max():
            chunk = chunk[~np.isin(chunk, qps)]
        yield chunk


def _check_majorant(
    key: str,
    values: ArrayInterval,
    pv: ArrayInterval,
    chunk: np.ndarray,
    comps: Sequence[TailComponent],
    p0: int,
) -> None:
    """Raise on a *certain* violation |value| > majorant on sieved primes > p0."""
    sel = chunk > p0
    if not np.any(sel):
        return
    vabs = values.abs()
    maj = _majorant_values(
        ArrayInterval(pv.lo[sel], pv.hi[sel]), comps
    )
    bad = vabs.lo[sel] > maj.hi
    if np.any(bad):
        p_bad = int(chunk[sel][np.argmax(bad)])
        raise MajorantViolation(f"{key}: majorant fails at p={p_bad}")


def certified_prime_sum(
    spec: PrimeTermSpec, q: int, prime_limit: int, threads: int = 1
) -> Interval:
    """Enclosure of sum over all primes p not dividing q of term(p)."""
    if prime_limit < 10**3:
        raise LimitExceeded("prime_limit must be at least 10^3")
    key = ("sum", spec.key, q, prime_limit)
    with _cache_lock:
        if key in _cache:
            return _cache[key]
    total = Interval(0.0, 0.0)
    for chunk in _chunks(prime_limit, q, threads):
        if chunk.size == 0:
            continue
        pv = ArrayInterval.exact(chunk.astype(np.float64))
        values = spec.term(pv)
        _check_majorant(spec.key, values, pv, chunk, spec.majorant, spec.p0)
        total = total + sum_enclosure(values)
    tail = tail_sum_bound(prime_limit, spec.majorant)
    if spec.nonnegative:
        total = total + Interval(0.0, tail.hi)
    else:
        total = total + Interval(-tail.hi, tail.hi)
    with _cache_lock:
        _cache[key] = total
    return total


def certified_prime_product(
    spec: PrimeFactorSpec, q: int, prime_limit: int, threads: int = 1
) -> Interval:
    """Enclosure of the product over primes p not dividing q of factor(p).

    With an acceleration schedule the product is computed as
    prod_i zeta(s_i)^{e_i} * prod_{p|q} (1 - p^-s_i)^{e_i} * (residual product),
    where the residual callable and its faster-decaying excess majorant are
    what the spec carries.
    """
    if prime_limit < 10**3:
        raise LimitExceeded("prime_limit must be at least 10^3")
    key = ("prod", spec.key, q, prime_limit)
    with _cache_lock:
        if key in _cache:
            return _cache[key]
    finite = _ONE
    for chunk in _chunks(prime_limit, q, threads):
        if chunk.size == 0:
            continue
        pv = ArrayInterval.exact(chunk.astype(np.float64))
        factors = spec.factor(pv)
        if not np.all(factors.lo > 0.0):
            p_bad = int(chunk[np.argmin(factors.lo > 0.0)])
            raise NonPositiveFactor(f"{spec.key}: factor not positive at p={p_bad}")
        _check_majorant(
            spec.key, factors - 1.0, pv, chunk, spec.excess, spec.p0
        )
        finite = finite * prod_enclosure(factors)
    ts = tail_sum_bound(prime_limit, spec.excess)
    if spec.nonneg_excess:
        tail_factor = Interval(1.0, ts.exp().hi)
    else:
        if ts.hi >= 0.5:
            raise TailDiverges(f"{spec.key}: tail excess too large to invert")
        lo = (-(ts / (_ONE - ts))).exp().lo
        tail_factor = Interval(lo, ts.exp().hi)
    total = finite * tail_factor
    for zeta_arg, expo in spec.schedule:
        acc = zeta_value(Interval.of(zeta_arg)) ** expo
        for p in prime_divisors(q):
            acc = acc * (_ONE - Interval.of(p).pow_interval(-Interval.of(zeta_arg))) ** expo
        total = total * acc
    with _cache_lock:
        _cache[key] = total
    return total


# ----------------------------------------------------------------------
# multiplicative function specifications and presets


@dataclass(frozen=True)
class DecayCertificate:
    """|f(p) p^alpha - 1| <= c p^-s for all primes p >= p0, with s = beta - alpha."""

    c: Interval
    s: Interval
    p0: int


@dataclass(frozen=True)
class FunctionSpec:
    name: str
    alpha: Interval
    beta: Interval
    f_at_prime: Callable[[int], FPrime]
    f_vector: Callable[[ArrayInterval], ArrayInterval]
    decay: DecayCertificate
    rational: bool = False
    alpha_integer: Optional[int] = None

    def key(self) -> str:
        return f"{self.name}[{self.alpha.lo},{self.alpha.hi}]"

    def i_f_at(self, p: int) -> Interval:
        """i_f(p) = f(p) p^alpha - 1 as an interval (exact when rational)."""
        fv = self.f_at_prime(p)
        if isinstance(fv, Fraction) and self.alpha_integer is not None:
            return Interval.from_fraction(fv * p**self.alpha_integer - 1)
        fiv = fv if isinstance(fv, Interval) else Interval.from_fraction(fv)
        return fiv * Interval.of(p).pow_interval(self.alpha) - 1

    def i_f_vector(self, pv: ArrayInterval) -> ArrayInterval:
        return self.f_vector(pv) * _p_pow(pv, self.alpha) - 1.0

    def f_abs_bound(self, p0: int) -> Interval:
        """Upper bound for |f(p)| p^alpha over p >= p0: 1 + c p0^-s."""
        return _ONE + self.decay.c * Interval.of(p0).pow_interval(-self.decay.s)


def _p_pow(pv: ArrayInterval, alpha: Interval) -> ArrayInterval:
    if alpha.is_point() and float(alpha.lo).is_integer() and 0 <= alpha.lo <= 4:
        n = int(alpha.lo)
        if n == 0:
            ones = np.ones_like(pv.lo)
            return ArrayInterval(ones, ones.copy())
        out = pv
        for _ in range(n - 1):
            out = out * pv
        return out
    return pv.pow_const(alpha)


def verify_decay(f: FunctionSpec, limit: int = 10**5) -> None:
    """Interval check of the decay certificate on sieved primes in [p0, limit].

    A c = 0 certificate asserts f(p) p^alpha = 1 exactly; for rational presets
    that is checked through the exact scalar route (the interval route cannot
    distinguish an exact zero from rounding fuzz).
    """
    if f.decay.c.hi == 0.0:
        if f.rational:
            for p in primes_up_to(min(limit, 10**3)):
                iv = f.i_f_at(int(p))
                if not (iv.lo == 0.0 and iv.hi == 0.0):
                    raise MajorantViolation(
                        f"{f.name}: c=0 certificate fails at p={int(p)}"
                    )
        return
    for chunk in _chunks(limit, 1, threads=1):
        sel = chunk >= f.decay.p0
        if not np.any(sel):
            continue
        sub = chunk[sel]
        pv = ArrayInterval.exact(sub.astype(np.float64))
        lhs = f.i_f_vector(pv).abs()
        rhs = pv.pow_const(-f.decay.s) * f.decay.c
        bad = ~(lhs.hi <= rhs.lo)
        if np.any(bad):
            raise MajorantViolation(
                f"{f.name}: decay certificate fails at p={int(sub[np.argmax(bad)])}"
            )


# preset constructors --------------------------------------------------


def _preset_one_over_phi() -> FunctionSpec:
    # |i_f(p)| = 1/(p-1) <= 2/p with strict margin from p = 3 on
    return FunctionSpec(
        name="one_over_phi",
        alpha=_ONE,
        beta=Interval.of(2),
        f_at_prime=lambda p: Fraction(1, p - 1),
        f_vector=lambda pv: 1.0 / (pv - 1.0),
        decay=DecayCertificate(c=Interval.of(2), s=_ONE, p0=3),
        rational=True,
        alpha_integer=1,
    )


def _preset_one_over_p() -> FunctionSpec:
    return FunctionSpec(
        name="one_over_p",
        alpha=_ONE,
        beta=Interval.of(2),
        f_at_prime=lambda p: Fraction(1, p),
        f_vector=lambda pv: 1.0 / pv,
        decay=DecayCertificate(c=Interval(0.0, 0.0), s=_ONE, p0=2),
        rational=True,
        alpha_integer=1,
    )


def _preset_unit() -> FunctionSpec:
    return FunctionSpec(
        name="unit",
        alpha=Interval(0.0, 0.0),
        beta=Interval.of(2),
        f_at_prime=lambda p: Fraction(1),
        f_vector=lambda pv: ArrayInterval(
            np.ones_like(pv.lo), np.ones_like(pv.lo)
        ),
        decay=DecayCertificate(c=Interval(0.0, 0.0), s=Interval.of(2), p0=2),
        rational=True,
        alpha_integer=0,
    )


def _preset_one_over_p_alpha(alpha) -> FunctionSpec:
    aiv = Interval.of(alpha)
    a_int = None
    rational = False
    if aiv.is_point() and float(aiv.lo).is_integer() and aiv.lo >= 0:
        a_int = int(aiv.lo)
        rational = True

    def f_scalar(p: int) -> FPrime:
        if a_int is not None:
            return Fraction(1, p**a_int)
        return Interval.of(p).pow_interval(-aiv)

    def f_vec(pv: ArrayInterval) -> ArrayInterval:
        if a_int is not None:
            return 1.0 / _p_pow(pv, aiv)
        return pv.pow_const(-aiv)

    return FunctionSpec(
        name="one_over_p_alpha",
        alpha=aiv,
        beta=aiv + 2,
        f_at_prime=f_scalar,
        f_vector=f_vec,
        decay=DecayCertificate(c=Interval(0.0, 0.0), s=Interval.of(2), p0=2),
        rational=rational,
        alpha_integer=a_int,
    )


_PRESETS: dict[str, Callable[..., FunctionSpec]] = {
    "one_over_phi": _preset_one_over_phi,
    "one_over_p": _preset_one_over_p,
    "unit": _preset_unit,
    "one_over_p_alpha": _preset_one_over_p_alpha,
}


def preset_names() -> list[str]:
    return sorted(_PRESETS)


def get_preset(name: str, alpha=None) -> FunctionSpec:
    if name not in _PRESETS:
        raise KeyError(f"unknown preset {name!r}; known: {preset_names()}")
    if name == "one_over_p_alpha":
        if alpha is None:
            raise ValueError("preset one_over_p_alpha requires alpha")
        return _PRESETS[name](alpha)
    if alpha is not None:
        raise ValueError(f"preset {name!r} does not take alpha")
    return _PRESETS[name]()


# ----------------------------------------------------------------------
# the named prime sums


_LOG_OVER_P_PM1 = PrimeTermSpec(
    key="log_p/(p(p-1))",
    term=lambda pv: pv.log() / (pv * (pv - 1.0)),
    # log n / (n(n-1)) <= (1000/999) log n n^-2 for n >= 1000
    majorant=(TailComponent(Interval.of(Fraction(1000, 999)), Interval.of(2), 1),),
    p0=1000,
)

_TWOLOG_OVER_P2M1 = PrimeTermSpec(
    key="2log_p/(p^2-1)",
    term=lambda pv: (2.0 * pv.log()) / (pv * pv - 1.0),
    majorant=(
        TailComponent(Interval.of(Fraction(2000000, 999999)), Interval.of(2), 1),
    ),
    p0=1000,
)


def mathfrak_a(q: int, prime_limit: int, threads: int = 1) -> Interval:
    """a_q = sum_p log p/(p(p-1)) + gamma + sum_{p|q} log p / p."""
    total = certified_prime_sum(_LOG_OVER_P_PM1, 1, prime_limit, threads)
    total = total + GAMMA.value
    for p in prime_divisors(q):
        total = total + Interval.of(p).log() / p
    return total


def mathfrak_b(q: int, prime_limit: int, threads: int = 1) -> Interval:
    """b_q = sum_p 2 log p/(p^2-1) + gamma + sum_{p|q} log p / (p+1)."""
    total = certified_prime_sum(_TWOLOG_OVER_P2M1, 1, prime_limit, threads)
    total = total + GAMMA.value
    for p in prime_divisors(q):
        total = total + Interval.of(p).log() / (p + 1)
    return total


def _t_term_spec(f: FunctionSpec) -> PrimeTermSpec:
    """Summand of the logarithmic main-term constant at alpha = 1.

    term(p) = log p (1 - (p-2) f(p)) / ((f(p)+1)(p-1)); with i = f(p)p - 1 the
    numerator is log p (2/p - i (1-2/p)), so |term| <= (log p/(p-1)) *
    (2/p + |i|) / (1 - |f|), giving two log-power tail components.
    """
    p0 = max(f.decay.p0, 1000)
    fmax = (f.f_abs_bound(p0) / p0).hi  # |f(p)| <= (1 + c p0^-s)/p0 for p >= p0
    inv = _ONE / Interval(1.0 - fmax, 1.0)
    edge = Interval.of(Fraction(p0, p0 - 1))
    comps = [TailComponent(2 * edge * inv, Interval.of(2), 1)]
    if f.decay.c.hi > 0.0:
        comps.append(
            TailComponent(f.decay.c * edge * inv, _ONE + f.decay.s, 1)
        )

    def term(pv: ArrayInterval) -> ArrayInterval:
        fv = f.f_vector(pv)
        denom = (fv + 1.0) * (pv - 1.0)
        if not np.all(denom.lo > 0.0):
            raise DegenerateFunction(f"{f.name}: f(p) = -1 on a sieved prime")
        return pv.log() * (1.0 - (pv - 2.0) * fv) / denom

    return PrimeTermSpec(
        key=f"T[{f.key()}]",
        term=term,
        majorant=tuple(comps),
        p0=p0,
        nonnegative=False,
    )


def T_f_q(f: FunctionSpec, q: int, prime_limit: int, threads: int = 1) -> Interval:
    """T_f^q = sum_{p not | q} log p (1-(p-2)f(p)) / ((f(p)+1)(p-1))."""
    if not (f.alpha.is_point() and f.alpha.lo == 1.0):
        raise DegenerateFunction("T_f^q is the alpha = 1 logarithmic constant")
    return certified_prime_sum(_t_term_spec(f), q, prime_limit, threads)


def general_log_derivative(
    f: FunctionSpec, q: int, prime_limit: int, threads: int = 1
) -> Interval:
    """sum_{p not | q} log p (1 - f(p)p^alpha + 2 f(p)) / ((f(p)+1)(p^alpha - 1))."""
    alpha = f.alpha
    if not alpha.strictly_positive():
        raise DegenerateFunction("log-derivative sum needs alpha > 0")
    p0 = max(f.decay.p0, 1000)
    # |numerator| <= log p (|i| + 2|f|), |f| <= (1+c p0^-s) p^-alpha
    fbig = f.f_abs_bound(p0)
    pa_edge = _ONE / (
        _ONE - Interval.of(p0).pow_interval(-alpha)
    )  # p^alpha/(p^alpha-1) <= this
    fmax = (fbig * Interval.of(p0).pow_interval(-alpha)).hi
    inv = pa_edge / Interval(1.0 - fmax, 1.0)
    comps = [TailComponent(2 * fbig * inv, 2 * alpha, 1)]
    if f.decay.c.hi > 0.0:
        comps.append(TailComponent(f.decay.c * inv, alpha + f.decay.s, 1))

    def term(pv: ArrayInterval) -> ArrayInterval:
        fv = f.f_vector(pv)
        pa = _p_pow(pv, alpha)
        denom = (fv + 1.0) * (pa - 1.0)
        if not np.all(denom.lo > 0.0):
            raise DegenerateFunction(f"{f.name}: f(p) = -1 on a sieved prime")
        return pv.log() * (1.0 - fv * pa + 2.0 * fv) / denom

    spec = PrimeTermSpec(
        key=f"logderiv[{f.key()}]",
        term=term,
        majorant=tuple(comps),
        p0=p0,
        nonnegative=False,
    )
    return certified_prime_sum(spec, q, prime_limit, threads)


# ----------------------------------------------------------------------
# the H / Hbar Euler products of the convolution method


def _analytic_domain_check(f: FunctionSpec, s: Interval) -> None:
    lower = imax(_ONE - f.beta, Interval.of(0.5) - f.alpha)
    if not lower.certainly_lt(s):
        raise OutsideAnalyticDomain(
            f"Re(s)={s!r} not certifiably above max(1-beta, 1/2-alpha)"
        )


def H_at(
    f: FunctionSpec,
    q: int,
    s,
    variant: str,
    prime_limit: int,
    threads: int = 1,
) -> Interval:
    """H_f^q(s) (signed) or Hbar_f^q(s) (absolute) as a certified product.

    signed:   prod_{p not | q} (1 - (1-f(p)p^alpha)/p^{s+alpha} - f(p)/p^{2s+alpha})
    absolute: prod_{p not | q} (1 + |1-f(p)p^alpha|/p^{s+alpha} + |f(p)|/p^{2s+alpha})
    """
    s = Interval.of(s)
    _analytic_domain_check(f, s)
    if variant not in ("signed", "absolute"):
        raise ValueError("variant must be 'signed' or 'absolute'")
    exact = _exact_hbar(f, q, s, variant)
    if exact is not None:
        return exact
    alpha = f.alpha
    e1 = s + alpha  # exponent under i_f
    e2 = 2 * s + alpha  # exponent under f
    p0 = max(f.decay.p0, 1000)
    fbig = f.f_abs_bound(p0)
    comps = [TailComponent(fbig, e2 + alpha, 0)]
    if f.decay.c.hi > 0.0:
        comps.append(TailComponent(f.decay.c, e1 + f.decay.s, 0))

    def factor(pv: ArrayInterval) -> ArrayInterval:
        fv = f.f_vector(pv)
        iv = f.i_f_vector(pv)
        t1 = iv * pv.pow_const(-e1)
        t2 = fv * pv.pow_const(-e2)
        if variant == "signed":
            return 1.0 + t1 - t2
        return 1.0 + t1.abs() + t2.abs()

    spec = PrimeFactorSpec(
        key=f"H{variant}[{f.key()}]s[{s.lo},{s.hi}]",
        factor=factor,
        excess=tuple(comps),
        p0=p0,
        nonneg_excess=(variant == "absolute"),
    )
    return certified_prime_product(spec, q, prime_limit, threads)


def _exact_hbar(
    f: FunctionSpec, q: int, s: Interval, variant: str
) -> Optional[Interval]:
    """Closed zeta-ratio form when f(p) = p^-alpha exactly (decay c = 0).

    Then i_f = 0 and the absolute and signed factors are 1 +- p^-(2s+2alpha),
    so the product telescopes to zeta ratios.
    """
    if f.decay.c.hi != 0.0:
        return None
    e = 2 * s + 2 * f.alpha
    if not e.certainly_gt(_ONE):
        raise OutsideAnalyticDomain(f"exponent {e!r} not > 1 for the zeta ratio")
    acc_adj = _ONE
    if variant == "absolute":
        # prod (1 + p^-e) = zeta(e)/zeta(2e)
        base = zeta_value(e) / zeta_value(2 * e)
        for p in prime_divisors(q):
            pe = Interval.of(p).pow_interval(-e)
            acc_adj = acc_adj / (_ONE + pe)
        return base * acc_adj
    # signed: prod (1 - p^-e) = 1/zeta(e)
    base = _ONE / zeta_value(e)
    for p in prime_divisors(q):
        pe = Interval.of(p).pow_interval(-e)
        acc_adj = acc_adj / (_ONE - pe)
    return base * acc_adj


def hbar_error_product(
    f: FunctionSpec, q: int, delta, prime_limit: int, threads: int = 1
) -> Interval:
    """Hbar_f^q(-delta), accelerated where a peeling schedule is known.

    For the 1/phi family (alpha=1, f(p)=1/(p-1)) the sharp route peels
    zeta(2-2 delta) and zeta(2-delta); the residual factors then decay like
    p^-(3-2 delta) and the claim is checked on every sieved prime above p0.
    """
    d_exact = delta if isinstance(delta, Fraction) else None
    delta = Interval.of(delta)
    sneg = -delta
    if d_exact is None:
        d_exact = Fraction(delta.lo) if delta.is_point() else Fraction(delta.mid())
    if f.name == "one_over_phi":
        e_f = 2 - 2 * delta
        e_i = 2 - delta
        if not (e_f.certainly_gt(_ONE) and e_i.certainly_gt(_ONE)):
            raise OutsideAnalyticDomain("peeling exponents must exceed 1")
        # peel and compensation must use the *same* exact exponents; which
        # rational they are only shifts work between zeta and the residual
        e_f_a = 2 - 2 * d_exact
        e_i_a = 2 - d_exact
        s_res = 3 - 2 * delta

        def residual(pv: ArrayInterval) -> ArrayInterval:
            base = (
                1.0
                + (1.0 / (pv - 1.0)) * pv.pow_const(-(_ONE - delta))
                + (1.0 / (pv - 1.0)) * pv.pow_const(-(_ONE - 2 * delta))
            )
            peel = (1.0 - pv.pow_const(-e_f_a)) * (1.0 - pv.pow_const(-e_i_a))
            return base * peel

        spec = PrimeFactorSpec(
            key=f"HbarAccel[one_over_phi]d[{delta.lo},{delta.hi}]",
            factor=residual,
            excess=(TailComponent(Interval.of(8), s_res, 0),),
            p0=1000,
            nonneg_excess=False,
            schedule=((e_f_a, 1), (e_i_a, 1)),
        )
        return certified_prime_product(spec, q, prime_limit, threads)
    return H_at(f, q, sneg, "absolute", prime_limit, threads)


# ----------------------------------------------------------------------
# critical-exponent products


def ramare_product(prime_limit: int, accelerate: bool = True, threads: int = 1) -> Interval:
    """P = prod_p (1 + 1/((p-1)(sqrt p - 1))).

    Accelerated route peels zeta(3/2) zeta(2); the residual factor is exactly
    1 + 2u^5 + u^6 + 2u^7 with u = p^-1/2, so its excess majorant is
    (2 + u0 + 2u0^2) u^5 from any validity point p0 = u0^-2.
    """
    if accelerate:
        p0 = 1000
        u0 = Interval.of(p0).pow_interval(Interval.of(-0.5))
        c = 2 + u0 + 2 * u0.square()

        def residual(pv: ArrayInterval) -> ArrayInterval:
            u = 1.0 / pv.sqrt()
            u2 = u * u
            u5 = u2 * u2 * u
            return 1.0 + 2.0 * u5 + u5 * u + 2.0 * u5 * u2

        spec = PrimeFactorSpec(
            key="RamareAccel",
            factor=residual,
            excess=(TailComponent(c, Interval.of(Fraction(5, 2)), 0),),
            p0=p0,
            nonneg_excess=True,
            schedule=((Fraction(3, 2), 1), (Fraction(2), 1)),
        )
        return certified_prime_product(spec, 1, prime_limit, threads)

    def factor(pv: ArrayInterval) -> ArrayInterval:
        return 1.0 + 1.0 / ((pv - 1.0) * (pv.sqrt() - 1.0))

    p0 = 1000
    edge = Interval.of(p0)
    # 1/((p-1)(sqrt p - 1)) <= c p^-3/2 with c = p0^{3/2}/((p0-1)(sqrt p0 -1))
    c = edge.pow_interval(Interval.of(1.5)) / (
        (edge - 1) * (edge.sqrt() - 1)
    )
    spec = PrimeFactorSpec(
        key="RamarePlain",
        factor=factor,
        excess=(TailComponent(c, Interval.of(Fraction(3, 2)), 0),),
        p0=p0,
        nonneg_excess=True,
    )
    return certified_prime_product(spec, 1, prime_limit, threads)


def critical_P(f: FunctionSpec, prime_limit: int, threads: int = 1) -> Interval:
    """P_alpha = prod over all p of (1 + |f(p)p^alpha - 1|/(sqrt p - 1))."""
    if f.decay.c.hi == 0.0:
        return _ONE  # i_f vanishes identically
    if f.name == "one_over_phi":
        return ramare_product(prime_limit, accelerate=True, threads=threads)
    p0 = max(f.decay.p0, 1000)
    s_eff = f.decay.s + Fraction(1, 2)
    if not s_eff.certainly_gt(_ONE):
        raise OutsideAnalyticDomain("P_alpha needs beta - alpha > 1/2")
    edge = _ONE / (_ONE - Interval.of(p0).pow_interval(Interval.of(-0.5)))

    def factor(pv: ArrayInterval) -> ArrayInterval:
        return 1.0 + f.i_f_vector(pv).abs() / (pv.sqrt() - 1.0)

    spec = PrimeFactorSpec(
        key=f"P[{f.key()}]",
        factor=factor,
        excess=(TailComponent(f.decay.c * edge, s_eff, 0),),
        p0=p0,
        nonneg_excess=True,
    )
    return certified_prime_product(spec, 1, prime_limit, threads)


def critical_p_of_q(f: FunctionSpec, q: int) -> Interval:
    """p_alpha(q) = prod_{p|q} (1 + (1-|i_f(p)|)/(sqrt p - 1 + |i_f(p)|))."""
    acc = _ONE
    for p in prime_divisors(q):
        ai = abs(f.i_f_at(p))
        acc = acc * (_ONE + (_ONE - ai) / (Interval.of(p).sqrt() - 1 + ai))
    return acc


# ----------------------------------------------------------------------
# the convolution kernel (exact, cube-free support)


def convolution_kernel(f: FunctionSpec, q: int, d: int) -> Fraction:
    """h_f^q(d): multiplicative, h(p) = f(p)p^alpha - 1, h(p^2) = -f(p)p^alpha,
    h(p^k) = 0 for k > 2; zero on primes dividing q.

    Exact rationals; requires a rational preset (f(p) in Q, alpha integer).
    """
    from .primes import factorize

    if not f.rational or f.alpha_integer is None:
        raise ValueError("convolution_kernel needs a rational preset")
    a = f.alpha_integer
    out = Fraction(1)
    for p, e in factorize(d):
        if q % p == 0:
            return Fraction(0)
        if e > 2:
            return Fraction(0)
        fpa = f.f_at_prime(p) * p**a
        out *= (fpa - 1) if e == 1 else -fpa
    return out


# ----------------------------------------------------------------------
# divisor-sum logarithmic identities


def mu_log_divisor_sum(q: int, alpha) -> Interval:
    """-sum_{d'|q} mu(d') log(d') / d'^alpha, over squarefree divisors."""
    from .primes import mobius

    alpha = Interval.of(alpha)
    total = Interval(0.0, 0.0)
    divs = [1]
    for p in prime_divisors(q):
        divs += [d * p for d in divs]
    for d in divs:
        if d == 1:
            continue
        mu = mobius(d)
        if mu == 0:
            continue
        term = Interval.of(d).log() / Interval.of(d).pow_interval(alpha)
        total = total - mu * term
    return total


def phi_log_prime_form(q: int, alpha) -> Interval:
    """(phi_alpha(q)/q^alpha) * sum_{p|q} log p / (p^alpha - 1)."""
    from .primes import phi_s

    alpha = Interval.of(alpha)
    lead = phi_s(q, alpha) / Interval.of(q).pow_interval(alpha)
    acc = Interval(0.0, 0.0)
    for p in prime_divisors(q):
        acc = acc + Interval.of(p).log() / (Interval.of(p).pow_interval(alpha) - 1)
    return lead * acc
