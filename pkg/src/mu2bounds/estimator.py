"""The two headline estimators and their critical constants.

``convolution_estimate`` carries the Dirichlet-convolution route: main term
from the signed Euler product H at 0 (and at 1-alpha), error constant
Delta_alpha^delta kappa_{alpha-delta}(q)/q^{alpha-delta} Hbar(-delta), valid
for every X > 0 at any admissible exponent delta.

``critical_estimate`` reaches the critical exponent alpha - 1/2.  Its error
constants are built from the E_alpha^(v) maxima (empty-range closed forms
plus the cited X >= 1 bounds 0.43 and 27/70 and our verified sup over
[1, 1573]) together with the convergent products P_alpha and p_alpha(q).
Every report emitted here is falsifiable by the brute-force sweep in the
oracle module; that sweep is the acceptance gate for all of these constants.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import (
    AlphaOutOfRange,
    AmbiguousComparison,
    BetaGapTooSmall,
    DegenerateFunction,
    DeltaOutOfRange,
    UnsupportedModulus,
)
from .eulerprod import (
    FunctionSpec,
    H_at,
    T_f_q,
    certified_prime_sum,
    critical_P,
    critical_p_of_q,
    get_preset,
    hbar_error_product,
    mathfrak_a,
    mathfrak_b,
    PrimeTermSpec,
    TailComponent,
)
from .interval import GAMMA, PI, SQRT2, Interval, imax
from .primes import euler_phi, kappa, kappa_s, phi_s, prime_divisors
from .supsearch import verified_sup_weighted_residual
from .tailconst import delta_constant, validate_delta_for_theorem
from .zeta import zeta_value

_ONE = Interval(1.0, 1.0)
_HALF = Interval(0.5, 0.5)

# cited external inputs (X >= 1 suprema from the literature)
_D1_CITED = Interval.of(Fraction(43, 100))
_NINE_OVER_70 = Fraction(9, 70)


@dataclass(frozen=True)
class MainTerm:
    coefficient: Interval
    shape: str  # "const" | "log" | "pow"
    exponent: Optional[Interval] = None

    def evaluate(self, X: Interval) -> Interval:
        if self.shape == "const":
            return self.coefficient
        if self.shape == "log":
            return self.coefficient * X.log()
        if self.shape == "pow":
            assert self.exponent is not None
            return self.coefficient * X.pow_interval(self.exponent)
        raise ValueError(f"unknown shape {self.shape!r}")

    def label(self) -> str:
        if self.shape == "pow":
            assert self.exponent is not None
            return f"pow[{self.exponent.lo},{self.exponent.hi}]"
        return self.shape


@dataclass(frozen=True)
class MainTermDescriptor:
    terms: tuple[MainTerm, ...]

    def __post_init__(self):
        labels = [t.label() for t in self.terms]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate main-term shapes: {labels}")

    def evaluate(self, X) -> Interval:
        xv = Interval.of(X)
        total = Interval(0.0, 0.0)
        for term in self.terms:
            total = total + term.evaluate(xv)
        return total


@dataclass(frozen=True)
class EstimateReport:
    """A certified claim |S(X) - main(X)| <= bound_at(X) on the stated domain.

    ``tail_sum`` marks reports whose S(X) is the tail sum over l > X rather
    than the partial sum up to X.
    """

    main: MainTermDescriptor
    error_constant: Interval
    error_exponent: Interval
    provenance: str
    error_has_log: bool = False
    additive_error_const: Interval = field(default_factory=lambda: Interval(0.0, 0.0))
    domain: str = "X>0"  # or "X>=1"
    tail_sum: bool = False

    def __post_init__(self):
        if self.error_constant.lo < 0.0:
            raise ValueError("error constant must be nonnegative")
        if self.domain not in ("X>0", "X>=1"):
            raise ValueError(f"unknown domain {self.domain!r}")

    def bound_at(self, X) -> Interval:
        xv = Interval.of(X)
        bound = self.error_constant * xv.pow_interval(-self.error_exponent)
        if self.error_has_log:
            bound = bound * (_ONE + xv.log() / 2)
        return self.additive_error_const + bound

    def admits(self, X: float) -> bool:
        return X > 0.0 if self.domain == "X>0" else X >= 1.0


# ----------------------------------------------------------------------
# E_alpha^(v) critical constants


_E_lock = threading.Lock()
_E_cache: dict[tuple, Interval] = {}


def _verified_c2(prime_limit: int) -> Interval:
    return verified_sup_weighted_residual(2, 1573, prime_limit=prime_limit).bound


def _d_constant(v: int, prime_limit: int) -> Interval:
    """X >= 1 supremum constants D_v feeding the critical-range maxima."""
    if v == 1:
        return _D1_CITED
    c2 = imax(Interval.from_fraction(3 * _NINE_OVER_70), _verified_c2(prime_limit))
    return (_ONE - _ONE / SQRT2) * c2


def E_alpha_v(alpha, v: int, prime_limit: int = 10**7) -> Interval:
    """The critical-exponent error constant E_alpha^(v), v in {1, 2}.

    At alpha = 1 these are the extended constants: E_1^(1) built from
    6 b_1/pi^2 and the cited 0.43, E_1^(2) from (1 - 1/sqrt 2) times the
    maximum of 4 b_2/pi^2, 27/70 and the verified sup over [1, 1573].
    """
    if v not in (1, 2):
        raise ValueError("v must be 1 or 2")
    alpha = Interval.of(alpha)
    if not alpha.certainly_gt(_HALF):
        raise AlphaOutOfRange(f"alpha={alpha!r} must exceed 1/2")
    key = (alpha.lo, alpha.hi, v, prime_limit)
    with _E_lock:
        if key in _E_cache:
            return _E_cache[key]
    if alpha.is_point() and alpha.lo == 1.0:
        from .supsearch import empty_range_sup_log

        if v == 1:
            out = imax(empty_range_sup_log(1, prime_limit), _D1_CITED)
        else:
            out = (_ONE - _ONE / SQRT2) * imax(
                empty_range_sup_log(2, prime_limit),
                Interval.from_fraction(3 * _NINE_OVER_70),
                _verified_c2(prime_limit),
            )
    else:
        if alpha.contains(1.0):
            raise AlphaOutOfRange(f"alpha={alpha!r} straddles 1")
        from .supsearch import empty_range_sup_power

        amh = alpha - _HALF
        cand_a = _d_constant(v, prime_limit) * (_ONE + abs(alpha - 1) / amh)
        out = imax(cand_a, empty_range_sup_power(alpha, v))
    with _E_lock:
        _E_cache[key] = out
    return out


def critical_constants(prime_limit: int = 10**7) -> "CriticalConstants":
    return CriticalConstants(
        E1v={1: E_alpha_v(1, 1, prime_limit), 2: E_alpha_v(1, 2, prime_limit)},
        Ealpha_v={1: E_alpha_v(2, 1, prime_limit), 2: E_alpha_v(2, 2, prime_limit)},
        D1=_d_constant(1, prime_limit),
        D2=_d_constant(2, prime_limit),
        H1=squarefree_count_bound(1),
        H2=squarefree_count_bound(2),
    )


@dataclass(frozen=True)
class CriticalConstants:
    E1v: dict[int, Interval]
    Ealpha_v: dict[int, Interval]
    D1: Interval
    D2: Interval
    H1: Interval
    H2: Interval


# ----------------------------------------------------------------------
# shared main-term builders


def _sum_log_over_pm1(q: int) -> Interval:
    total = Interval(0.0, 0.0)
    for p in prime_divisors(q):
        total = total + Interval.of(p).log() / (p - 1)
    return total


def _reject_degenerate(f: FunctionSpec, check_limit: int = 10**5) -> None:
    """f(p) = -1 on a sieved prime degenerates the logarithmic main term."""
    import numpy as np

    from .bulk import ArrayInterval
    from .primes import primes_up_to

    ps = primes_up_to(check_limit)
    fv = f.f_vector(ArrayInterval.exact(ps.astype(np.float64)))
    bad = (fv + 1.0).lo <= 0.0
    if np.any(bad):
        raise DegenerateFunction(
            f"{f.name}: f(p) = -1 at p={int(ps[np.argmax(bad)])}"
        )


def _main_alpha_one(f: FunctionSpec, q: int, prime_limit: int, threads: int) -> MainTermDescriptor:
    _reject_degenerate(f)
    h0 = H_at(f, q, Interval(0.0, 0.0), "signed", prime_limit, threads)
    lead = h0 * Fraction(euler_phi(q), q)
    t = T_f_q(f, q, prime_limit, threads)
    const = lead * (t + GAMMA.value + _sum_log_over_pm1(q))
    return MainTermDescriptor(
        terms=(
            MainTerm(coefficient=lead, shape="log"),
            MainTerm(coefficient=const, shape="const"),
        )
    )


def _main_alpha_general(
    f: FunctionSpec, q: int, prime_limit: int, threads: int
) -> MainTermDescriptor:
    alpha = f.alpha
    h0 = H_at(f, q, Interval(0.0, 0.0), "signed", prime_limit, threads)
    qa = Interval.of(q).pow_interval(alpha)
    const = h0 * zeta_value(alpha) * phi_s(q, alpha) / qa
    h1a = H_at(f, q, _ONE - alpha, "signed", prime_limit, threads)
    pow_coef = -(h1a * Fraction(euler_phi(q), q) / (alpha - 1))
    return MainTermDescriptor(
        terms=(
            MainTerm(coefficient=const, shape="const"),
            MainTerm(coefficient=pow_coef, shape="pow", exponent=_ONE - alpha),
        )
    )


def _main_f(f: FunctionSpec, q: int, prime_limit: int, threads: int) -> MainTermDescriptor:
    if f.alpha.is_point() and f.alpha.lo == 1.0:
        return _main_alpha_one(f, q, prime_limit, threads)
    return _main_alpha_general(f, q, prime_limit, threads)


def _h_prime_zero(f: FunctionSpec, q: int, prime_limit: int, threads: int) -> Interval:
    """H'(0) = prod_{p not | q} (1 - (p^{1-alpha} - f(p)p + f(p))/p^{2-alpha}).

    Equals the signed product at 0 of the shifted function f'(p) = f(p)p^{alpha-1},
    which satisfies the hypotheses at exponent 1; its convolution excess is
    i_f/p - f/p^{2-alpha}, so decay only needs beta > alpha.
    """
    if f.decay.c.hi == 0.0:
        # f(p) = p^-alpha exactly: factor = 1 - p^-2
        base = _ONE / zeta_value(Interval.of(2))
        for p in prime_divisors(q):
            base = base / (_ONE - Interval.of(p).square().recip())
        return base
    shifted = _shifted_spec(f)
    return H_at(shifted, q, Interval(0.0, 0.0), "signed", prime_limit, threads)


def _shifted_spec(f: FunctionSpec) -> FunctionSpec:
    """f'(p) = f(p) p^{alpha-1}: same i_f, exponent pair (1, 1 + beta - alpha)."""
    alpha = f.alpha

    def f_scalar(p: int):
        base = f.f_at_prime(p)
        shift = Interval.of(p).pow_interval(alpha - 1)
        fiv = base if isinstance(base, Interval) else Interval.from_fraction(base)
        return fiv * shift

    def f_vec(pv):
        return f.f_vector(pv) * pv.pow_const(alpha - 1)

    return FunctionSpec(
        name=f"{f.name}'",
        alpha=_ONE,
        beta=_ONE + (f.beta - f.alpha),
        f_at_prime=f_scalar,
        f_vector=f_vec,
        decay=f.decay,
        rational=False,
        alpha_integer=None,
    )


# ----------------------------------------------------------------------
# Theorem-level estimators


def convolution_estimate(
    f: FunctionSpec, q: int, delta, prime_limit: int = 10**7, threads: int = 1
) -> EstimateReport:
    """Convolution-method estimate with error exponent delta, valid on X > 0."""
    if not f.alpha.certainly_gt(_HALF):
        raise AlphaOutOfRange("convolution method needs alpha > 1/2")
    if not f.beta.certainly_gt(_ONE):
        raise AlphaOutOfRange("convolution method needs beta > 1")
    d_exact = delta if isinstance(delta, Fraction) else None
    delta_iv = Interval.of(delta)
    if not validate_delta_for_theorem(f.alpha, f.beta, delta_iv):
        raise DeltaOutOfRange(
            f"delta={delta_iv!r} outside (max(0,alpha-1), min(beta-1, alpha-1/2))"
        )
    dc = delta_constant(f.alpha, delta_iv)
    amd = f.alpha - delta_iv
    coef_q = kappa_s(q, amd) / Interval.of(q).pow_interval(amd)
    hbar = hbar_error_product(
        f, q, d_exact if d_exact is not None else delta_iv, prime_limit, threads
    )
    err = dc.value * coef_q * hbar
    main = _main_f(f, q, prime_limit, threads)
    return EstimateReport(
        main=main,
        error_constant=err,
        error_exponent=delta_iv,
        provenance=f"convolution[{f.name},q={q},delta={delta_iv.mid():.6g}]",
    )


def _w_blend(t: Interval, e1: Interval, e2: Interval) -> Interval:
    """Odd-q weight ((sqrt2-1)/(sqrt2-1+t)) (E1 + t E2/phi_1/2(2)), t = |i_f(2)|."""
    s2m1 = SQRT2 - 1
    phi_half_2 = phi_s(2, _HALF)
    return (s2m1 / (s2m1 + t)) * (e1 + t * e2 / phi_half_2)


def critical_estimate(
    f: FunctionSpec, q: int, prime_limit: int = 10**7, threads: int = 1
) -> EstimateReport:
    """Critical-exponent estimate; dispatches on the sign of alpha - 1/2."""
    gap = f.beta - f.alpha
    if not gap.certainly_gt(_HALF):
        raise BetaGapTooSmall(
            f"beta-alpha={gap!r} not certifiably > 1/2; use convolution_estimate"
        )
    alpha = f.alpha
    if alpha.certainly_gt(_HALF):
        return _critical_case_a(f, q, prime_limit, threads)
    if alpha.certainly_lt(_HALF):
        return _critical_case_b(f, q, prime_limit, threads)
    if alpha.is_point() and alpha.lo == 0.5:
        return _critical_case_c(f, q, prime_limit, threads)
    raise AmbiguousComparison(f"alpha={alpha!r} cannot be placed against 1/2")


def _critical_case_a(
    f: FunctionSpec, q: int, prime_limit: int, threads: int
) -> EstimateReport:
    alpha = f.alpha
    e2 = E_alpha_v(alpha, 2, prime_limit)
    if q % 2 == 0:
        w = e2
    else:
        e1 = E_alpha_v(alpha, 1, prime_limit)
        w = _w_blend(abs(f.i_f_at(2)), e1, e2)
    err = critical_p_of_q(f, q) * w * critical_P(f, prime_limit, threads)
    main = _main_f(f, q, prime_limit, threads)
    return EstimateReport(
        main=main,
        error_constant=err,
        error_exponent=alpha - _HALF,
        provenance=f"critical-A[{f.name},q={q}]",
    )


def _bprime_weight(f: FunctionSpec, q: int, prime_limit: int) -> Interval:
    e2 = E_alpha_v(1, 2, prime_limit)
    if q % 2 == 0:
        return e2
    e1 = E_alpha_v(1, 1, prime_limit)
    return _w_blend(abs(f.i_f_at(2)), e1, e2)


def _critical_case_b(
    f: FunctionSpec, q: int, prime_limit: int, threads: int
) -> EstimateReport:
    alpha = f.alpha
    hp = _h_prime_zero(f, q, prime_limit, threads)
    coef = hp * Fraction(euler_phi(q), q) / (_ONE - alpha)
    main = MainTermDescriptor(
        terms=(MainTerm(coefficient=coef, shape="pow", exponent=_ONE - alpha),)
    )
    wp = _bprime_weight(f, q, prime_limit)
    amp = _ONE + (2 - 2 * alpha) / (_ONE - 2 * alpha)
    err = critical_p_of_q(f, q) * amp * wp * critical_P(f, prime_limit, threads)
    return EstimateReport(
        main=main,
        error_constant=err,
        error_exponent=alpha - _HALF,  # negative: the error grows like X^{1/2-alpha}
        provenance=f"critical-B[{f.name},q={q}]",
    )


def _critical_case_c(
    f: FunctionSpec, q: int, prime_limit: int, threads: int
) -> EstimateReport:
    hp = _h_prime_zero(f, q, prime_limit, threads)
    lead = hp * Fraction(euler_phi(q), q)
    main = MainTermDescriptor(
        terms=(MainTerm(coefficient=2 * lead, shape="pow", exponent=_HALF),)
    )
    wp = _bprime_weight(f, q, prime_limit)
    err = critical_p_of_q(f, q) * wp * critical_P(f, prime_limit, threads)
    tsum = _critical_log_constant_sum(f, q, prime_limit, threads)
    additive = abs(lead * (tsum + GAMMA.value + _sum_log_over_pm1(q) - 2))
    return EstimateReport(
        main=main,
        error_constant=err,
        error_exponent=Interval(0.0, 0.0),
        error_has_log=True,
        additive_error_const=additive,
        domain="X>=1",
        provenance=f"critical-C[{f.name},q={q}]",
    )


def _critical_log_constant_sum(
    f: FunctionSpec, q: int, prime_limit: int, threads: int
) -> Interval:
    """sum_{p not | q} log p (sqrt p - (p-2) f(p)) / ((f(p) + sqrt p)(p-1))."""
    p0 = max(f.decay.p0, 1000)
    edge = Interval.of(Fraction(p0, p0 - 1))
    fmax = (f.f_abs_bound(p0) * Interval.of(p0).pow_interval(-f.alpha)).hi
    inv = edge / Interval(1.0 - fmax, 1.0)
    comps = [TailComponent(2 * inv, Interval.of(2), 1)]
    if f.decay.c.hi > 0.0:
        comps.append(TailComponent(f.decay.c * inv, _ONE + f.decay.s, 1))

    def term(pv):
        fv = f.f_vector(pv)
        rt = pv.sqrt()
        return pv.log() * (rt - (pv - 2.0) * fv) / ((fv + rt) * (pv - 1.0))

    spec = PrimeTermSpec(
        key=f"Tcrit[{f.key()}]",
        term=term,
        majorant=tuple(comps),
        p0=p0,
        nonnegative=False,
    )
    return certified_prime_sum(spec, q, prime_limit, threads)


# ----------------------------------------------------------------------
# the seekfor-style direct estimates


def coprime_power_estimate(
    q: int, alpha, prime_limit: int = 10**7, threads: int = 1
) -> EstimateReport:
    """Estimate of sum_{l<=X, (l,q)=1} mu^2(l)/l^alpha at the critical exponent."""
    alpha = Interval.of(alpha)
    if not alpha.certainly_gt(_HALF):
        raise AlphaOutOfRange(f"alpha={alpha!r} must exceed 1/2")
    v = 2 if q % 2 == 0 else 1
    e_const = E_alpha_v(alpha, v, prime_limit)
    scale = Interval.of(q).sqrt() / phi_s(q, _HALF)
    kap = Interval.from_fraction(kappa(q))
    pi2 = PI.value.square()
    if alpha.is_point() and alpha.lo == 1.0:
        bq = mathfrak_b(q, prime_limit, threads=threads)
        lead = Interval.of(q) / kap * 6 / pi2
        main = MainTermDescriptor(
            terms=(
                MainTerm(coefficient=lead, shape="log"),
                MainTerm(coefficient=lead * bq, shape="const"),
            )
        )
    else:
        if alpha.contains(1.0):
            raise AlphaOutOfRange(f"alpha={alpha!r} straddles 1")
        const = (
            Interval.of(q).pow_interval(alpha)
            / kappa_s(q, alpha)
            * zeta_value(alpha)
            / zeta_value(2 * alpha)
        )
        pow_coef = -(Interval.of(q) / kap * 6 / ((alpha - 1) * pi2))
        main = MainTermDescriptor(
            terms=(
                MainTerm(coefficient=const, shape="const"),
                MainTerm(coefficient=pow_coef, shape="pow", exponent=_ONE - alpha),
            )
        )
    return EstimateReport(
        main=main,
        error_constant=scale * e_const,
        error_exponent=alpha - _HALF,
        provenance=f"coprime-power[q={q},alpha={alpha.mid():.6g}]",
    )


def mu2_square_tail(q: int, prime_limit: int = 10**7) -> EstimateReport:
    """Tail estimate sum_{l>X, (l,q)=1} mu^2(l)/l^2, X > 0."""
    v = 2 if q % 2 == 0 else 1
    e_const = E_alpha_v(Interval.of(2), v, prime_limit)
    scale = Interval.of(q).sqrt() / phi_s(q, _HALF)
    lead = Interval.of(q) / Interval.from_fraction(kappa(q)) * 6 / PI.value.square()
    main = MainTermDescriptor(
        terms=(MainTerm(coefficient=lead, shape="pow", exponent=Interval.of(-1)),)
    )
    return EstimateReport(
        main=main,
        error_constant=scale * e_const,
        error_exponent=Interval.of(Fraction(3, 2)),
        provenance=f"mu2-square-tail[q={q}]",
        tail_sum=True,
    )


def squarefree_count_bound(v: int) -> Interval:
    """H_1 = sqrt(3)(1 - 6/pi^2), H_2 = 1 - 4/pi^2."""
    pi2 = PI.value.square()
    if v == 1:
        return Interval.of(3).sqrt() * (_ONE - 6 / pi2)
    if v == 2:
        return _ONE - 4 / pi2
    raise ValueError("v must be 1 or 2")


def squarefree_count_report(v: int) -> EstimateReport:
    lead = Interval.of(v) / Interval.from_fraction(kappa(v)) * 6 / PI.value.square()
    main = MainTermDescriptor(
        terms=(MainTerm(coefficient=lead, shape="pow", exponent=_ONE),)
    )
    return EstimateReport(
        main=main,
        error_constant=squarefree_count_bound(v),
        error_exponent=Interval(-0.5, -0.5),
        provenance=f"squarefree-count[v={v}]",
    )


# ----------------------------------------------------------------------
# comparison against the cited coprime-average constants


@dataclass(frozen=True)
class ComparisonRow:
    q: int
    ours: Interval
    theirs: Interval
    ours_leq_theirs: bool


_COMPARISON_MODULI = (2, 3, 5, 6, 10, 14)


def _j_factor(p: int) -> Interval:
    if p == 2:
        return Interval.from_fraction(Fraction(21, 25))
    pv = Interval.of(p)
    rt = pv.sqrt()
    return _ONE + (pv - 2) / (pv * rt - rt + 1)


def ra13_comparison(q: int, prime_limit: int = 10**7) -> ComparisonRow:
    """Our critical error constant for 1/phi against 5.9 j(q)."""
    if q not in _COMPARISON_MODULI:
        raise UnsupportedModulus(f"q={q} not in {_COMPARISON_MODULI}")
    f = get_preset("one_over_phi")
    ours = critical_estimate(f, q, prime_limit).error_constant
    theirs = Interval.from_fraction(Fraction(59, 10))
    for p in prime_divisors(q):
        theirs = theirs * _j_factor(p)
    return ComparisonRow(
        q=q, ours=ours, theirs=theirs, ours_leq_theirs=ours.hi <= theirs.lo
    )


def comparison_table(prime_limit: int = 10**7) -> list[ComparisonRow]:
    return [ra13_comparison(q, prime_limit) for q in _COMPARISON_MODULI]


# convenience re-exports for the CLI layer
__all__ = [
    "MainTerm",
    "MainTermDescriptor",
    "EstimateReport",
    "CriticalConstants",
    "E_alpha_v",
    "critical_constants",
    "convolution_estimate",
    "critical_estimate",
    "coprime_power_estimate",
    "mu2_square_tail",
    "squarefree_count_bound",
    "squarefree_count_report",
    "ComparisonRow",
    "ra13_comparison",
    "comparison_table",
    "mathfrak_a",
    "mathfrak_b",
]
