import random
from fractions import Fraction

import pytest

from mu2bounds.errors import PoleAtOne
from mu2bounds.interval import Interval
from mu2bounds.zeta import partial_power_sum, zeta_rigorous, zeta_value


def test_partial_harmonic_ten():
    out = partial_power_sum(10, 1)
    assert out.contains(Fraction(7381, 2520))
    assert out.width() < 1e-12


def test_partial_sum_empty():
    out = partial_power_sum(0.5, Interval.of(2))
    assert out.lo == out.hi == 0.0


def test_partial_sum_alpha2_exact_oracle():
    true = sum(Fraction(1, n * n) for n in range(1, 101))
    out = partial_power_sum(100, 2)
    assert out.contains(true)


def test_partial_sum_nonumeric_alpha_oracle():
    import mpmath

    mpmath.mp.dps = 40
    a = Fraction(4, 3)
    true = sum(mpmath.power(n, -mpmath.mpf(4) / 3) for n in range(1, 501))
    out = partial_power_sum(500, Interval.of(a))
    assert out.lo <= float(true) <= out.hi


def test_zeta_closed_forms():
    import mpmath

    mpmath.mp.dps = 40
    z2 = zeta_value(Interval.of(2), 10**5)
    assert z2.lo <= float(mpmath.pi**2 / 6) <= z2.hi
    z4 = zeta_value(Interval.of(4), 10**5)
    assert z4.lo <= float(mpmath.pi**4 / 90) <= z4.hi


def test_zeta_four_thirds_against_euler_maclaurin_oracle():
    import mpmath

    mpmath.mp.dps = 40
    z = zeta_rigorous(Interval.of(Fraction(4, 3)), 10**6)
    assert z.value.width() <= 1e-6
    true = float(mpmath.zeta(mpmath.mpf(4) / 3))
    assert z.value.lo <= true <= z.value.hi


@pytest.mark.parametrize(
    "alpha",
    [Fraction(6, 5), Fraction(4, 3), Fraction(3, 2), Fraction(5, 3), 2, Fraction(8, 3), 4],
)
def test_cutoff_consistency(alpha):
    a = zeta_value(Interval.of(alpha), 10**5)
    b = zeta_value(Interval.of(alpha), 10**6)
    assert a.intersects(b)


@pytest.mark.parametrize("alpha", [Fraction(6, 5), 2, 4])
def test_width_bound(alpha):
    N = 10**5
    z = zeta_rigorous(Interval.of(alpha), N)
    assert z.value.width() <= 3.0 * N ** (-float(z.alpha.lo)) + 1e-9


@pytest.mark.parametrize("alpha", [Fraction(1, 2), Fraction(4, 3), 2])
def test_recip_inequality_not_violated(alpha):
    # |zeta(a) - 1/((a-1)X^(a-1)) - sum_{n<=X} n^-a| <= 1/X^a, in interval form
    rng = random.Random(int(alpha * 12))
    aiv = Interval.of(alpha)
    z = zeta_value(aiv, 10**5)
    for _ in range(200):
        X = rng.uniform(1.0000001, 10**4)
        partial = partial_power_sum(X, aiv)
        pole = Interval.of(X).pow_interval(Interval.of(1) - aiv) / (aiv - 1)
        lhs = abs(z - pole - partial)
        rhs = Interval.of(X).pow_interval(-aiv)
        # violation would need lhs certainly above rhs
        assert lhs.lo <= rhs.hi, X


def test_pole_rejected():
    with pytest.raises(PoleAtOne):
        zeta_rigorous(Interval.of(1), 100)
    with pytest.raises(PoleAtOne):
        zeta_rigorous(Interval(0.99, 1.01), 100)
    with pytest.raises(PoleAtOne):
        zeta_rigorous(Interval.of(-2), 100)
