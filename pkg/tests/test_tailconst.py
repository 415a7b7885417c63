from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mu2bounds.errors import AmbiguousComparison, DeltaOutOfRange
from mu2bounds.interval import GAMMA, Interval
from mu2bounds.tailconst import (
    delta_constant,
    powersum_estimate,
    validate_delta_for_theorem,
)

F = Fraction


def test_delta_1_1_is_gamma():
    # 1/e^(gamma+1) ~ 0.2065 < gamma, so the boundary value wins
    dc = delta_constant(1, 1)
    assert dc.value.intersects(GAMMA.value)
    assert dc.value.width() < 1e-12


def test_delta_equal_branch_returns_one():
    dc = delta_constant(2, 2)
    assert dc.value.lo == dc.value.hi == 1.0


def test_delta_1_third_critical_branch():
    dc = delta_constant(1, F(1, 3))
    # oracle: 3 / e^(gamma/3 + 1) to 30 digits (mpmath)
    assert dc.value.contains(F("0.910471271309020348758938826"))
    assert dc.value.width() < 1e-12


def test_delta_values_frozen():
    # mpmath-derived oracles for the four grid pairs
    cases = {
        (1, F(1, 3)): F("0.9104712713090203487589388260909707635355"),
        (1, F(45, 100)): F("0.6305017468589386502934212677182045165882"),
        (F(4, 3), F(1, 2)): F("1.05395529190275397256887349274"),
        (2, F(12, 10)): F("0.644934066848226436472415166646"),
    }
    for (a, d), truth in cases.items():
        dc = delta_constant(Interval.of(a), Interval.of(d))
        assert dc.value.contains(truth), (a, d)
        assert dc.value.hi <= float(truth) * 1.0001


def test_delta_boundary_alpha_minus_one():
    dc = delta_constant(2, 1)
    assert dc.value.contains(1)
    assert dc.value.hi < 1.0001


def test_monotone_blowup_as_delta_shrinks():
    d001 = delta_constant(1, F(1, 100)).value
    d01 = delta_constant(1, F(1, 10)).value
    d13 = delta_constant(1, F(1, 3)).value
    assert d001.lo > d01.hi > d13.hi


def test_value_floor_invariant():
    floor = min(1.0, GAMMA.value.lo)
    for a, d in ((1, 1), (1, F(1, 3)), (2, 2), (2, F(12, 10)), (F(4, 3), F(1, 2))):
        assert delta_constant(Interval.of(a), Interval.of(d)).value.hi >= floor


def test_grid_oracle_within_five_percent():
    import mpmath

    mpmath.mp.dps = 30
    gamma = float(mpmath.euler)
    ys = np.geomspace(1.0 + 1e-7, 1e6, 100_000)
    for a, d in ((1, F(1, 3)), (1, F(45, 100)), (F(4, 3), F(1, 2)), (2, F(12, 10))):
        dv = float(d)
        if a == 1:
            functional = np.abs(np.log(ys) - gamma) / ys**dv
        else:
            av = float(a)
            z = float(mpmath.zeta(mpmath.mpf(a.numerator) / a.denominator))
            functional = np.abs(z - ys ** (av - 1) / (av - 1)) / ys**dv
        grid_sup = float(functional.max())
        certified = delta_constant(Interval.of(a), Interval.of(d)).value
        assert certified.hi >= grid_sup, (a, d)
        assert certified.hi <= 1.05 * grid_sup, (a, d)


def test_powersum_empty_range_example():
    main, bound = powersum_estimate(F(1, 2), 1, F(1, 3))
    # true sum is 0, so |main| must sit under the bound
    assert abs(main).hi <= bound.lo


def test_powersum_harmonic_residual():
    import gmpy2

    H = sum(gmpy2.mpq(1, n) for n in range(1, 1001))
    main, bound = powersum_estimate(1000, 1, F(1, 3))
    true = Fraction(int(H.numerator), int(H.denominator))
    resid = abs(float(true) - main.mid())
    assert resid <= bound.lo
    assert bound.hi <= 0.0911  # Delta_1^(1/3) / 10


def test_powersum_alpha2_exact_oracle():
    true = sum(Fraction(1, n * n) for n in range(1, 10**4 + 1))
    main, bound = powersum_estimate(10**4, 2, 1)
    resid = abs(float(true - Fraction(main.mid())))
    assert resid <= bound.lo


def test_powersum_containment_random():
    import random

    rng = random.Random(99)
    for _ in range(50):
        X = rng.uniform(0.01, 2000)
        main, bound = powersum_estimate(X, 2, F(3, 2))
        true = sum(Fraction(1, n * n) for n in range(1, int(X) + 1))
        lo = Fraction(main.lo) - Fraction(bound.hi)
        hi = Fraction(main.hi) + Fraction(bound.hi)
        assert lo <= true <= hi, X


@settings(max_examples=20, deadline=None)
@given(
    st.fractions(min_value=F(11, 10), max_value=F(5, 2)).filter(lambda a: a != 1),
    st.fractions(min_value=F(1, 10), max_value=F(9, 10)),
    st.floats(min_value=0.01, max_value=500.0),
)
def test_powersum_containment_property(alpha, mix, X):
    # delta drawn strictly inside (alpha-1, alpha)
    import mpmath

    mpmath.mp.dps = 30
    delta = (alpha - 1) + mix * (alpha - (alpha - 1)) if alpha > 1 else mix * alpha
    delta = F(delta).limit_denominator(10**6)
    if not (max(F(0), alpha - 1) < delta < alpha):
        return
    main, bound = powersum_estimate(X, Interval.of(alpha), Interval.of(delta))
    true = sum(
        mpmath.power(n, -mpmath.mpf(alpha.numerator) / alpha.denominator)
        for n in range(1, int(X) + 1)
    )
    assert main.lo - bound.hi <= float(true) <= main.hi + bound.hi


def test_validate_delta_examples():
    assert validate_delta_for_theorem(1, 2, F(1, 3)) is True
    assert validate_delta_for_theorem(1, 2, F(1, 2)) is False
    assert validate_delta_for_theorem(2, 4, F(9, 10)) is False


def test_validate_delta_ambiguous():
    # alpha straddles 1, so delta = 1/2 cannot be placed against alpha - 1/2
    with pytest.raises(AmbiguousComparison):
        validate_delta_for_theorem(
            Interval(0.99, 1.01), Interval.of(2), Interval.of(F(1, 2))
        )


def test_delta_out_of_range():
    with pytest.raises(DeltaOutOfRange):
        delta_constant(1, 2)
    with pytest.raises(DeltaOutOfRange):
        delta_constant(3, 1)  # needs delta > alpha - 1 = 2
    with pytest.raises(DeltaOutOfRange):
        delta_constant(1, F(3, 2))  # alpha = 1 requires delta <= 1
