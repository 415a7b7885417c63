"""Brute-force ground truth and pointwise verification of emitted bounds.

``direct_average`` evaluates the averaged sums exactly (gmpy2 rationals when
f(p) is rational and alpha is an integer) or as certified interval cumulative
sums.  ``bound_sweep`` then checks an EstimateReport's claim at every grid
point: a sweep passes iff the certified margin (bound minus |residual|) is
nonnegative at every tested X.  Failures are data, not exceptions.

The default grid covers the regimes where these bounds are tight: every
squarefree jump point up to 10^4 together with its left-limit X = n - 2^-20
(residual extrema live at left-limits, e.g. X -> 3^-), a geometric grid with
ratio 1.05 up to the requested maximum, and 50 log-spaced points inside
(0, 1), where the sums are empty but the estimates still claim validity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import gmpy2
import numpy as np

from .bulk import ArrayInterval, cumsum_enclosure
from .errors import LimitExceeded
from .estimator import EstimateReport
from .eulerprod import FunctionSpec
from .interval import Interval, decimal_bound
from .primes import phi_table, prime_divisors, squarefree_table
from .zeta import zeta_value

_ONE = Interval(1.0, 1.0)

_TABLE_LIMIT = 2 * 10**7  # dense-table cap; keeps the oracle inside desk memory
_EXACT_ROW_CUTOFF = 10**4
_LEFT_LIMIT_EPS = 2.0**-20


@dataclass(frozen=True)
class SweepRow:
    X: float
    partial_sum: Interval
    main_value: Interval
    residual: Interval
    bound_value: Interval
    margin: Interval
    exact: bool


def sweep_passes(rows: Sequence[SweepRow]) -> bool:
    return all(row.margin.lo >= 0.0 for row in rows)


def worst_margin(rows: Sequence[SweepRow]) -> float:
    return min((row.margin.lo for row in rows), default=float("inf"))


# ----------------------------------------------------------------------
# jump tables


def _jumps(q: int, xmax: int) -> np.ndarray:
    """Squarefree integers coprime to q up to xmax, ascending."""
    if xmax > _TABLE_LIMIT:
        raise LimitExceeded(f"xmax={xmax} above the dense-table cap {_TABLE_LIMIT}")
    flags = squarefree_table(xmax).copy()
    for p in prime_divisors(q):
        if p <= xmax:
            flags[p::p] = False
    return np.flatnonzero(flags).astype(np.int64)


def _term_table(f: FunctionSpec, jumps: np.ndarray) -> ArrayInterval:
    """Certified f(l) for squarefree l; closed forms for the shipped presets."""
    lv = ArrayInterval.exact(jumps.astype(np.float64))
    if f.name == "one_over_phi":
        xmax = int(jumps[-1]) if jumps.size else 1
        phi = phi_table(xmax)[jumps]
        return 1.0 / ArrayInterval.exact(phi.astype(np.float64))
    if f.name == "one_over_p":
        return 1.0 / lv
    if f.name == "unit":
        ones = np.ones(jumps.size, dtype=np.float64)
        return ArrayInterval(ones, ones.copy())
    if f.name == "one_over_p_alpha":
        if f.alpha_integer is not None:
            if f.alpha_integer == 0:
                ones = np.ones(jumps.size, dtype=np.float64)
                return ArrayInterval(ones, ones.copy())
            out = lv
            for _ in range(f.alpha_integer - 1):
                out = out * lv
            return 1.0 / out
        return lv.pow_const(-f.alpha)
    return _sieve_multiplicative(f, jumps)


def _sieve_multiplicative(f: FunctionSpec, jumps: np.ndarray) -> ArrayInterval:
    """Generic positive multiplicative fill: f(l) = prod_{p | l} f(p)."""
    if jumps.size == 0:
        return ArrayInterval(np.empty(0), np.empty(0))
    xmax = int(jumps[-1])
    lo = np.ones(xmax + 1, dtype=np.float64)
    hi = np.ones(xmax + 1, dtype=np.float64)
    from .primes import primes_up_to

    for p in primes_up_to(xmax):
        p = int(p)
        fp = f.f_at_prime(p)
        fiv = fp if isinstance(fp, Interval) else Interval.from_fraction(fp)
        if fiv.lo <= 0.0:
            raise LimitExceeded("generic sieve fill requires positive f(p)")
        lo[p::p] = np.nextafter(lo[p::p] * fiv.lo, -np.inf)
        hi[p::p] = np.nextafter(hi[p::p] * fiv.hi, np.inf)
    return ArrayInterval(lo[jumps], hi[jumps])


def _exact_terms(f: FunctionSpec, jumps: np.ndarray) -> list:
    """Exact gmpy2 rationals f(l) for rational presets."""
    if f.name == "one_over_phi":
        xmax = int(jumps[-1]) if jumps.size else 1
        phi = phi_table(xmax)
        return [gmpy2.mpq(1, int(phi[l])) for l in jumps]
    if f.name == "one_over_p":
        return [gmpy2.mpq(1, int(l)) for l in jumps]
    if f.name == "unit":
        return [gmpy2.mpq(1) for _ in range(jumps.size)]
    if f.name == "one_over_p_alpha" and f.alpha_integer is not None:
        a = f.alpha_integer
        return [gmpy2.mpq(1, int(l) ** a) for l in jumps]
    raise LimitExceeded(f"no exact route for preset {f.name!r}")


def direct_average(f: FunctionSpec, q: int, X) -> Union[Fraction, Interval]:
    """sum over squarefree l <= X coprime to q of f(l); exact when possible."""
    xfloor = _floor_positive(X)
    if xfloor < 1:
        return Fraction(0) if f.rational else Interval(0.0, 0.0)
    jumps = _jumps(q, xfloor)
    if f.rational:
        total = gmpy2.mpq(0)
        for t in _exact_terms(f, jumps):
            total += t
        return Fraction(int(total.numerator), int(total.denominator))
    terms = _term_table(f, jumps)
    if terms.size == 0:
        return Interval(0.0, 0.0)
    cums = cumsum_enclosure(terms)
    return Interval(float(cums.lo[-1]), float(cums.hi[-1]))


def _floor_positive(X) -> int:
    if isinstance(X, Fraction):
        return X.numerator // X.denominator if X > 0 else 0
    xf = float(X)
    if xf <= 0.0:
        return 0
    return int(np.floor(xf))


# ----------------------------------------------------------------------
# grids


def default_grid(
    f: Optional[FunctionSpec],
    q: int,
    xmax: float,
    dense_max: int = _EXACT_ROW_CUTOFF,
) -> np.ndarray:
    """Jump points and left-limits to dense_max, geometric to xmax, 50 in (0,1)."""
    xmax = float(xmax)
    parts = [np.geomspace(1e-3, 0.995, 50)]
    dense_top = int(min(dense_max, xmax))
    if dense_top >= 1:
        jumps = _jumps(q, dense_top).astype(np.float64)
        parts.append(jumps)
        parts.append(jumps - _LEFT_LIMIT_EPS)
    if xmax > dense_top:
        n_geo = max(2, int(np.ceil(np.log(xmax / dense_top) / np.log(1.05))) + 1)
        parts.append(np.geomspace(dense_top, xmax, n_geo))
    grid = np.unique(np.concatenate(parts))
    return grid[(grid > 0.0) & (grid <= xmax)]


# ----------------------------------------------------------------------
# the sweep itself


def _tail_total(q: int) -> Interval:
    """sum over all squarefree l coprime to q of 1/l^2 = zeta(2)/zeta(4) adjusted."""
    total = zeta_value(Interval.of(2)) / zeta_value(Interval.of(4))
    for p in prime_divisors(q):
        total = total / (_ONE + Interval.of(p).square().recip())
    return total


def bound_sweep(
    report: EstimateReport,
    f: FunctionSpec,
    q: int,
    grid: Sequence[float],
) -> list[SweepRow]:
    """Evaluate the report's claim on the grid; each row carries its margin."""
    xs = np.asarray(sorted(float(x) for x in grid), dtype=np.float64)
    mask = np.array([report.admits(float(x)) for x in xs], dtype=bool)
    xs = xs[mask]
    if xs.size == 0:
        return []
    xmax = int(np.floor(float(xs[-1])))
    jumps = _jumps(q, max(xmax, 1))
    terms = _term_table(f, jumps)
    cums = cumsum_enclosure(terms)
    exact_avail = f.rational
    exact_cums: dict[int, gmpy2.mpq] = {}
    if exact_avail:
        cutoff_idx = int(np.searchsorted(jumps, _EXACT_ROW_CUTOFF, side="right"))
        running = gmpy2.mpq(0)
        for idx, t in enumerate(_exact_terms(f, jumps[:cutoff_idx])):
            running += t
            exact_cums[idx] = running

    tail_total = _tail_total(q) if report.tail_sum else None

    rows: list[SweepRow] = []
    for x in xs:
        xf = float(x)
        k = int(np.searchsorted(jumps, int(np.floor(xf)), side="right"))
        exact = False
        if k == 0:
            partial = Interval(0.0, 0.0)
            exact = exact_avail
        elif exact_avail and (k - 1) in exact_cums:
            s = exact_cums[k - 1]
            partial = Interval.from_fraction(
                Fraction(int(s.numerator), int(s.denominator))
            )
            exact = True
        else:
            partial = Interval(float(cums.lo[k - 1]), float(cums.hi[k - 1]))
        main = report.main.evaluate(xf)
        if report.tail_sum:
            assert tail_total is not None
            residual = (tail_total - partial) - main
        else:
            residual = partial - main
        bound = report.bound_at(xf)
        margin = bound - abs(residual)
        rows.append(
            SweepRow(
                X=xf,
                partial_sum=partial,
                main_value=main,
                residual=residual,
                bound_value=bound,
                margin=margin,
                exact=exact,
            )
        )
    return rows


def sweep_report(
    report: EstimateReport,
    f: FunctionSpec,
    q: int,
    xmax: float,
) -> list[SweepRow]:
    return bound_sweep(report, f, q, default_grid(f, q, xmax))


# ----------------------------------------------------------------------
# non-rigorous empirical maxima (slack measurement)


def empirical_sup(
    f: FunctionSpec,
    q: int,
    weight_exponent: float,
    x_lo: float,
    x_hi: float,
    main: Optional[object] = None,
    prime_limit: int = 10**7,
) -> float:
    """Float maximum of X^w |S(X) - main(X)| over jump points and left-limits.

    Non-rigorous by design: used to measure the observed slack of the proven
    constants, not to certify anything.
    """
    if main is None:
        from .estimator import critical_estimate

        main = critical_estimate(f, q, prime_limit).main
    if not (0.0 < x_lo <= x_hi) or x_hi > _TABLE_LIMIT:
        raise LimitExceeded("empirical range must sit inside (0, table cap]")
    xs: list[float] = []
    if x_hi >= 1.0:
        jumps = _jumps(q, int(np.floor(x_hi)))
        jj = jumps[(jumps >= max(1.0, x_lo))].astype(np.float64)
        xs.extend(jj.tolist())
        xs.extend((jj - _LEFT_LIMIT_EPS).tolist())
    lo_grid_hi = min(x_hi, 0.9999)
    if x_lo < 1.0:
        xs.extend(np.geomspace(max(x_lo, 1e-6), lo_grid_hi, 200).tolist())
    xs = [x for x in xs if x_lo <= x <= x_hi]
    if not xs:
        return 0.0
    jumps_all = _jumps(q, max(int(np.floor(x_hi)), 1))
    terms = _term_table(f, jumps_all)
    mid_terms = (terms.lo + terms.hi) / 2.0
    cums = np.concatenate([[0.0], np.cumsum(mid_terms)])
    best = 0.0
    for x in xs:
        k = int(np.searchsorted(jumps_all, int(np.floor(x)), side="right"))
        s = float(cums[k])
        m = main.evaluate(float(x)).mid()
        best = max(best, float(x) ** weight_exponent * abs(s - m))
    return best


# ----------------------------------------------------------------------
# CSV emission


CSV_HEADER = "X,partial_sum,main,residual,bound,margin"


def rows_to_csv(rows: Sequence[SweepRow]) -> str:
    """CSV with 12-digit decimal fields; lower bounds except the claimed bound.

    The margin column is the certified lower bound of (bound - |residual|), so
    a nonnegative printed margin is a sound pass verdict on its own.
    """
    out = [CSV_HEADER]
    for row in sorted(rows, key=lambda r: r.X):
        out.append(
            ",".join(
                (
                    repr(row.X),
                    decimal_bound(row.partial_sum, 12, "lower"),
                    decimal_bound(row.main_value, 12, "lower"),
                    decimal_bound(row.residual, 12, "lower"),
                    decimal_bound(row.bound_value, 12, "upper"),
                    decimal_bound(row.margin, 12, "lower"),
                )
            )
        )
    return "\n".join(out) + "\n"


# ----------------------------------------------------------------------
# vectorized check of the squarefree-count bound (all integers to xmax)


@dataclass(frozen=True)
class CountCheck:
    """Outcome of the vectorized squarefree-count verification.

    The count bound is attained with *equality* (at X = 3 for v = 1 and
    X = 1 for v = 2), so a strict margin >= 0 can never be float-certified
    there.  ``passed`` therefore means: no certain violation anywhere, and
    wherever strictness could not be certified the margin is provably within
    ``equality_slack`` of zero.
    """

    passed: bool
    certain_violations: int
    uncertified: int
    equality_slack: float


def verify_squarefree_counts(
    v: int, xmax: int, equality_slack: float = 1e-9
) -> CountCheck:
    """Check |#{squarefree l <= X, (l,v)=1} - main X| <= H_v sqrt X on integers.

    Runs over every integer X <= xmax and every jump left-limit, vectorized;
    between those points the residual is monotone, so this covers [1, xmax].
    """
    from .estimator import squarefree_count_bound
    from .interval import PI
    from .primes import kappa

    if xmax > _TABLE_LIMIT:
        raise LimitExceeded(f"xmax={xmax} above the dense-table cap")
    flags = squarefree_table(xmax).copy()
    if v == 2:
        flags[2::2] = False
    counts = np.cumsum(flags.astype(np.int64))
    ns = np.arange(1, xmax + 1, dtype=np.float64)
    lead = Interval.of(v) / Interval.from_fraction(kappa(v)) * 6 / PI.value.square()
    hv = squarefree_count_bound(v)
    x_iv = ArrayInterval.exact(ns)
    bound = x_iv.sqrt() * hv
    violations = 0
    uncertified = 0
    near_ok = True
    for arr in (counts[1:], counts[:-1]):
        resid = (ArrayInterval.exact(arr.astype(np.float64)) - x_iv * lead).abs()
        violations += int(np.count_nonzero(resid.lo > bound.hi))
        loose = resid.hi > bound.lo
        uncertified += int(np.count_nonzero(loose))
        if np.any(loose):
            gap = np.abs(bound.hi[loose] - resid.lo[loose])
            near_ok = near_ok and bool(np.all(gap <= equality_slack))
    return CountCheck(
        passed=(violations == 0 and near_ok),
        certain_violations=violations,
        uncertified=uncertified,
        equality_slack=equality_slack,
    )
