import math
from fractions import Fraction

import numpy as np
import pytest

from mu2bounds.errors import (
    AlphaOutOfRange,
    BetaGapTooSmall,
    DegenerateFunction,
    UnsupportedModulus,
)
from mu2bounds.bulk import ArrayInterval
from mu2bounds.estimator import (
    E_alpha_v,
    comparison_table,
    convolution_estimate,
    coprime_power_estimate,
    critical_constants,
    critical_estimate,
    mu2_square_tail,
    ra13_comparison,
    squarefree_count_bound,
)
from mu2bounds.eulerprod import (
    DecayCertificate,
    FunctionSpec,
    get_preset,
    mathfrak_a,
    mathfrak_b,
)
from mu2bounds.interval import Interval, decimal_bound, make_interval

F = Fraction
PL = 10**6  # unit-test scale; acceptance reruns at 1e7/1e8


def test_E_constants_frozen_values():
    assert 1.043 <= E_alpha_v(1, 1, PL).lo and E_alpha_v(1, 1, PL).hi <= 1.045
    e12 = E_alpha_v(1, 2, PL)
    assert 0.231 <= e12.lo and e12.hi <= 0.232
    # mpmath-derived oracles
    assert E_alpha_v(2, 1, PL).contains(F("0.911890652781039942994915168888"))
    assert E_alpha_v(2, 2, PL).contains(F("0.237410300887945908685141566145"))


def test_E_alpha_out_of_range():
    with pytest.raises(AlphaOutOfRange):
        E_alpha_v(F(1, 2), 1, PL)
    with pytest.raises(AlphaOutOfRange):
        E_alpha_v(F(1, 4), 2, PL)


def test_critical_constants_invariants():
    cc = critical_constants(PL)
    assert cc.D1.contains(F("0.43"))
    assert cc.H1.contains(F("0.67909017985960335078702558929"))
    assert cc.H2.contains(F("0.59471526543064891422448214716"))


def test_convolution_one_over_phi_q1(one_over_phi):
    r = convolution_estimate(one_over_phi, 1, F(1, 3), PL)
    shapes = {t.shape: t for t in r.main.terms}
    assert shapes["log"].coefficient.contains(1)
    assert shapes["const"].coefficient.intersects(mathfrak_a(1, PL))
    assert r.error_constant.intersects(
        make_interval("7.35984783249704", "7.35984795957735")
    )
    assert r.domain == "X>0"


def test_convolution_one_over_p_q1(one_over_p):
    import mpmath

    mpmath.mp.dps = 30
    r = convolution_estimate(one_over_p, 1, F(1, 3), PL)
    shapes = {t.shape: t for t in r.main.terms}
    assert shapes["log"].coefficient.lo <= float(6 / mpmath.pi**2) <= shapes["log"].coefficient.hi
    assert abs(r.error_constant.mid() - 2.5530092) < 1e-5


def test_convolution_q2_leading_half(one_over_phi):
    r = convolution_estimate(one_over_phi, 2, F(1, 3), PL)
    shapes = {t.shape: t for t in r.main.terms}
    assert shapes["log"].coefficient.contains(F(1, 2))
    assert shapes["const"].coefficient.intersects(mathfrak_a(2, PL) / 2)
    r1 = convolution_estimate(one_over_phi, 1, F(1, 3), PL)
    assert r.error_constant.hi < r1.error_constant.lo  # A_2 < 1 shrinks it


def test_critical_one_over_phi_constants(one_over_phi):
    r1 = critical_estimate(one_over_phi, 1, PL)
    assert decimal_bound(r1.error_constant, 3, "upper") == "4.400"
    r2 = critical_estimate(one_over_phi, 2, PL)
    assert decimal_bound(r2.error_constant, 3, "upper") == "2.169"
    assert r1.error_exponent.contains(F(1, 2))


def test_critical_one_over_p_reduces_to_E(one_over_p):
    r = critical_estimate(one_over_p, 1, PL)
    e11 = E_alpha_v(1, 1, PL)
    # w-formula degeneracy: i_f(2) = 0, P = 1, p(1) = 1
    assert r.error_constant.intersects(e11)
    assert abs(r.error_constant.mid() - e11.mid()) < 1e-12


def test_cross_theorem_main_terms_intersect(one_over_phi):
    for q in (1, 2, 3, 6):
        a = convolution_estimate(one_over_phi, q, F(1, 3), PL)
        b = critical_estimate(one_over_phi, q, PL)
        sa = {t.shape: t.coefficient for t in a.main.terms}
        sb = {t.shape: t.coefficient for t in b.main.terms}
        assert set(sa) == set(sb)
        for shape in sa:
            assert sa[shape].intersects(sb[shape]), (q, shape)


def test_unit_case_b(unit):
    import mpmath

    mpmath.mp.dps = 30
    r = critical_estimate(unit, 1, PL)
    assert len(r.main.terms) == 1
    t = r.main.terms[0]
    assert t.shape == "pow" and t.exponent.contains(1)
    assert t.coefficient.lo <= float(6 / mpmath.pi**2) <= t.coefficient.hi
    # error constant = 3 E_1^(1), exponent -1/2 (bound grows like sqrt X)
    assert r.error_constant.intersects(3 * E_alpha_v(1, 1, PL))
    assert r.error_exponent.contains(F(-1, 2))
    assert r.domain == "X>0"


def test_case_c_alpha_half():
    f = get_preset("one_over_p_alpha", alpha=F(1, 2))
    r = critical_estimate(f, 1, PL)
    assert r.domain == "X>=1"
    assert r.error_has_log
    t = r.main.terms[0]
    assert t.shape == "pow" and t.exponent.contains(F(1, 2))
    import mpmath

    mpmath.mp.dps = 30
    # main 2 (6/pi^2) sqrt(X); additive |(6/pi^2)(b_1 - 2)|
    assert t.coefficient.lo <= float(12 / mpmath.pi**2) <= t.coefficient.hi
    b1 = mathfrak_b(1, PL)
    expected_add = abs((6 / Interval.of(math.pi).square()) * (b1 - 2))
    assert abs(r.additive_error_const.mid() - expected_add.mid()) < 1e-4


def test_coprime_power_matches_critical(one_over_p):
    a = coprime_power_estimate(1, 1, PL)
    b = critical_estimate(one_over_p, 1, PL)
    assert a.error_constant.intersects(b.error_constant)
    sa = {t.shape: t.coefficient for t in a.main.terms}
    sb = {t.shape: t.coefficient for t in b.main.terms}
    for shape in sa:
        assert sa[shape].intersects(sb[shape])


def test_coprime_power_q6():
    r = coprime_power_estimate(6, 1, PL)
    shapes = {t.shape: t for t in r.main.terms}
    # q/kappa(q) * 6/pi^2 with kappa(6) = 12
    import mpmath

    mpmath.mp.dps = 30
    lead = float(F(6, 12)) * float(6 / mpmath.pi**2)
    assert shapes["log"].coefficient.lo <= lead <= shapes["log"].coefficient.hi
    b6 = mathfrak_b(6, PL)
    b1 = mathfrak_b(1, PL)
    expected = b1 + Interval.of(2).log() / 3 + Interval.of(3).log() / 4
    assert b6.intersects(expected)


def test_coprime_power_alpha2_plumbing():
    r = coprime_power_estimate(3, 2, PL)
    assert r.error_exponent.contains(F(3, 2))
    shapes = {t.shape: t for t in r.main.terms}
    assert "const" in shapes and "pow" in shapes


def test_mu2_square_tail_constants():
    r1 = mu2_square_tail(1, PL)
    assert r1.tail_sum
    assert r1.error_constant.intersects(E_alpha_v(2, 1, PL))
    r2 = mu2_square_tail(2, PL)
    scale = Interval.of(2).sqrt() / (Interval.of(2).sqrt() - 1)
    assert r2.error_constant.intersects(scale * E_alpha_v(2, 2, PL))
    main10 = r1.main.evaluate(10)
    import mpmath

    mpmath.mp.dps = 30
    assert main10.lo <= float(6 / mpmath.pi**2 / 10) <= main10.hi


def test_comparison_table_all_improved():
    table = comparison_table(PL)
    assert [row.q for row in table] == [2, 3, 5, 6, 10, 14]
    assert all(row.ours_leq_theirs for row in table)
    q2 = table[0]
    assert abs(q2.theirs.mid() - 4.956) < 1e-9
    assert q2.ours.hi <= 2.17


def test_comparison_p_multiplicative():
    from mu2bounds.eulerprod import critical_p_of_q, get_preset

    f = get_preset("one_over_phi")
    p2 = critical_p_of_q(f, 2)
    p3 = critical_p_of_q(f, 3)
    p6 = critical_p_of_q(f, 6)
    assert p6.intersects(p2 * p3)


def test_inequality_chain_at_p3():
    # (p-2)/(p^{3/2} - p - sqrt p + 2) < 1/sqrt p at p = 3
    p = Interval.of(3)
    lhs = (p - 2) / (p * p.sqrt() - p - p.sqrt() + 2)
    rhs = 1 / p.sqrt()
    assert lhs.certainly_lt(rhs)


def test_unsupported_modulus():
    with pytest.raises(UnsupportedModulus):
        ra13_comparison(4, PL)


def test_squarefree_count_bound_values():
    import mpmath

    mpmath.mp.dps = 30
    h1 = squarefree_count_bound(1)
    assert h1.lo <= float(mpmath.sqrt(3) * (1 - 6 / mpmath.pi**2)) <= h1.hi
    h2 = squarefree_count_bound(2)
    assert h2.lo <= float(1 - 4 / mpmath.pi**2) <= h2.hi


def _narrow_gap_spec() -> FunctionSpec:
    # beta - alpha = 1/4 <= 1/2: critical route must refuse
    return FunctionSpec(
        name="narrow",
        alpha=Interval(1.0, 1.0),
        beta=Interval.of(F(5, 4)),
        f_at_prime=lambda p: F(1, p),
        f_vector=lambda pv: 1.0 / pv,
        decay=DecayCertificate(c=Interval.of(1), s=Interval.of(F(1, 4)), p0=2),
    )


def test_beta_gap_too_small():
    with pytest.raises(BetaGapTooSmall):
        critical_estimate(_narrow_gap_spec(), 1, 10**4)


def _degenerate_spec() -> FunctionSpec:
    # f(2) = -1 degenerates the logarithmic main term
    def f_scalar(p):
        return F(-1) if p == 2 else F(1, p)

    def f_vec(pv):
        lo = np.where(pv.lo == 2.0, -1.0, 1.0 / pv.hi)
        hi = np.where(pv.hi == 2.0, -1.0, 1.0 / pv.lo)
        return ArrayInterval(lo, hi)

    return FunctionSpec(
        name="degenerate",
        alpha=Interval(1.0, 1.0),
        beta=Interval.of(2),
        f_at_prime=f_scalar,
        f_vector=f_vec,
        decay=DecayCertificate(c=Interval.of(4), s=Interval.of(1), p0=3),
    )


def test_degenerate_function_rejected():
    with pytest.raises(DegenerateFunction):
        convolution_estimate(_degenerate_spec(), 1, F(1, 3), 10**4)
