import math
from fractions import Fraction

import numpy as np
import pytest

from mu2bounds.errors import AlphaOutOfRange, LimitExceeded
from mu2bounds.eulerprod import mathfrak_b
from mu2bounds.interval import Interval
from mu2bounds.supsearch import (
    empty_range_sup_log,
    empty_range_sup_power,
    verified_sup_weighted_residual,
)

F = Fraction
PL = 10**7


def test_intt_sup_bracket_and_witness():
    r = verified_sup_weighted_residual(2, 1573, prime_limit=PL)
    assert 0.40672 <= r.bound.hi <= 0.40673
    assert r.witness_X.contains(3)
    assert r.witness_piece == (2, 3)
    assert r.attained_lower.lo <= r.bound.hi
    assert r.bound.hi - r.attained_lower.lo <= 1e-5


def test_single_point_domain():
    r = verified_sup_weighted_residual(1, 1, prime_limit=PL)
    b1 = mathfrak_b(1, PL)
    expected = abs(Interval.of(1) - (6 / (Interval.of(math.pi).square())) * b1)
    # loose pi here; just check the certified value against a float oracle
    approx = abs(1 - 6 / math.pi**2 * b1.mid())
    assert abs(r.bound.mid() - approx) < 1e-9


def test_small_range_matches_dense_grid():
    r = verified_sup_weighted_residual(2, 10, prime_limit=PL)
    b2 = mathfrak_b(2, PL).mid()
    a = 4 / math.pi**2
    xs = np.linspace(1, 10, 10**6)
    steps = np.zeros_like(xs)
    acc = 0.0
    jump_points = [1, 3, 5, 7]  # odd squarefree <= 10: 1,3,5,7 (9 excluded)
    vals = {1: 1.0, 3: 1 / 3, 5: 1 / 5, 7: 1 / 7}
    for i, x in enumerate(xs):
        steps[i] = sum(v for k, v in vals.items() if k <= x)
    func = np.sqrt(xs) * np.abs(steps - a * (np.log(xs) + b2))
    grid_sup = func.max()
    assert r.bound.hi >= grid_sup - 1e-9
    assert r.bound.hi <= grid_sup + 1e-3  # grid resolution slack


def test_grid_domination_random():
    r = verified_sup_weighted_residual(2, 1573, prime_limit=PL)
    rng = np.random.default_rng(17)
    xs = np.sort(rng.uniform(1.0, 1573.0, size=10**6))
    b2 = mathfrak_b(2, PL).mid()
    a = 4 / math.pi**2
    from mu2bounds.primes import squarefree_table

    sq = squarefree_table(1573)
    jumps = np.flatnonzero(sq & (np.arange(1574) % 2 == 1))
    terms = 1.0 / jumps
    cums = np.concatenate([[0.0], np.cumsum(terms)])
    k = np.searchsorted(jumps, np.floor(xs).astype(np.int64), side="right")
    func = np.sqrt(xs) * np.abs(cums[k] - a * (np.log(xs) + b2))
    assert r.bound.hi >= func.max() - 1e-12


def test_empty_range_sup_log_values():
    v1 = empty_range_sup_log(1, PL)
    assert v1.contains(F("1.0438943940824")) or abs(v1.mid() - 1.04389) < 1e-4
    v2 = empty_range_sup_log(2, PL)
    assert abs(v2.mid() - 0.78957) < 1e-4
    # the critical value the proof compares against: t_1(y0) ~ 0.1895 < 1.0438
    b1 = mathfrak_b(1, PL)
    a = 6 / Interval.of(math.pi).square()
    ty0 = 2 * a * (-(Interval.of(1) + b1 / 2)).exp()
    assert abs(ty0.mid() - 0.1895) < 2e-3
    assert ty0.hi < v1.lo


def test_empty_range_sup_power_values():
    e21 = empty_range_sup_power(Interval.of(2), 1)
    assert e21.contains(F("0.911890652781039942994915168888"))
    e22 = empty_range_sup_power(Interval.of(2), 2)
    assert e22.contains(F("0.237410300887945908685141566145"))


def test_empty_range_sup_power_grid_oracle():
    import mpmath

    mpmath.mp.dps = 30
    a = 1.5
    bound = empty_range_sup_power(Interval.of(F(3, 2)), 1)
    z = float(mpmath.zeta(a))
    z2 = float(mpmath.zeta(2 * a))
    xs = np.geomspace(1e-9, 1.0 - 1e-9, 10**5)
    func = xs ** (a - 0.5) * np.abs(z / z2 - 6 / ((a - 1) * math.pi**2) * xs ** (1 - a))
    grid = func.max()
    assert bound.hi >= grid - 1e-12
    assert bound.hi <= grid * 1.001


def test_range_cap():
    with pytest.raises(LimitExceeded):
        verified_sup_weighted_residual(2, 10**6, prime_limit=PL)


def test_alpha_out_of_range():
    with pytest.raises(AlphaOutOfRange):
        empty_range_sup_power(Interval.of(F(1, 3)), 1)
    with pytest.raises(AlphaOutOfRange):
        empty_range_sup_power(Interval.of(1), 1)
