import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mu2bounds.errors import (
    DivisionByZeroInterval,
    DomainError,
    MalformedInterval,
    MaxAmbiguous,
)
from mu2bounds.interval import (
    GAMMA,
    Interval,
    arithmetic,
    certified_max,
    decimal_bound,
    elementary,
    imax,
    interval_to_json,
    make_interval,
)

GAMMA_40 = Fraction("0.5772156649015328606065120900824024310421")


def test_make_interval_gamma():
    iv = make_interval("0.5772156649015328", "0.5772156649015329")
    assert iv.contains(GAMMA_40)


def test_make_interval_point_one():
    iv = make_interval("1", "1")
    assert iv.lo == iv.hi == 1.0


def test_make_interval_tenth_is_widened():
    iv = make_interval("0.1", "0.1")
    assert iv.lo < iv.hi
    assert iv.contains(Fraction(1, 10))


def test_make_interval_rejects_reversed():
    with pytest.raises(MalformedInterval):
        make_interval("2", "1")


def test_interval_rejects_nan():
    with pytest.raises(MalformedInterval):
        Interval(float("nan"), 1.0)


def test_add_example():
    out = arithmetic(Interval(1, 2), Interval(3, 4), "add")
    assert out.contains(4) and out.contains(6)
    assert out.lo <= 4 and out.hi >= 6


def test_mul_sign_cases():
    out = arithmetic(Interval(-1, 2), Interval(3, 4), "mul")
    assert out.lo <= -4 and out.hi >= 8


def test_div_contains_third():
    out = arithmetic(Interval(1, 1), Interval(3, 3), "div")
    assert out.lo < 1 / 3 < out.hi or out.contains(Fraction(1, 3))
    assert out.contains(Fraction(1, 3))


def test_div_by_zero_interval():
    with pytest.raises(DivisionByZeroInterval):
        Interval(1, 1) / Interval(-1, 1)


def test_exp_contains_e():
    out = elementary(Interval(1, 1), "exp")
    assert out.contains(Fraction("2.718281828459045235360287471352662497757"))


def test_sqrt_of_4_9():
    out = elementary(Interval(4, 9), "sqrt")
    assert out.contains(2) and out.contains(3)
    assert out.width() < 1e-14 + 1.0  # [2,3] up to rounding slack
    assert abs(out.lo - 2) < 1e-12 and abs(out.hi - 3) < 1e-12


def test_pow_contains_2_sqrt2():
    out = elementary(Interval(2, 2), "pow", r=Interval(1.5, 1.5))
    # oracle: 2^(3/2) to 30 digits
    assert out.contains(Fraction("2.828427124746190097603377448419"))


def test_log_domain_error():
    with pytest.raises(DomainError):
        Interval(-1, 1).log()
    with pytest.raises(DomainError):
        Interval(-2, -1).sqrt()


def test_integer_pow_even_across_zero():
    out = Interval(-2, 1) ** 2
    assert out.lo <= 0.0 and out.hi >= 4.0
    assert out.lo >= -1e-15  # dependent square stays near [0, 4]


def test_decimal_bound_examples():
    assert decimal_bound(GAMMA.value, 3, "upper") == "0.578"
    assert decimal_bound(make_interval("1.0438", "1.0439"), 3, "upper") == "1.044"
    assert decimal_bound(make_interval("9.37522", "9.37531"), 4, "lower") == "9.3752"


def test_decimal_bound_negative():
    iv = make_interval("-1.2345", "-1.2341")
    assert decimal_bound(iv, 3, "upper") == "-1.234"
    assert decimal_bound(iv, 3, "lower") == "-1.235"


@given(
    st.floats(min_value=-1e12, max_value=1e12, allow_nan=False),
    st.integers(min_value=0, max_value=10),
)
def test_decimal_bound_round_trip(x, digits):
    iv = Interval(x, x)
    up = Fraction(decimal_bound(iv, digits, "upper"))
    lo = Fraction(decimal_bound(iv, digits, "lower"))
    assert lo <= Fraction(x) <= up


def test_interval_to_json_never_narrows():
    iv = make_interval("0.1", "0.30000000000000004")
    j = interval_to_json(iv)
    assert Fraction(j["lo"]) <= Fraction(iv.lo)
    assert Fraction(j["hi"]) >= Fraction(iv.hi)


def test_gamma_named_constant():
    assert GAMMA.value.contains(GAMMA_40)
    assert GAMMA.value.width() < 1e-15


def test_imax_hull_and_certified_max():
    a = Interval(1, 2)
    b = Interval(1.5, 3)
    m = imax(a, b)
    assert m.lo == 1.5 and m.hi == 3
    with pytest.raises(MaxAmbiguous):
        certified_max(a, b)
    assert certified_max(Interval(0, 1), Interval(2, 3)) == Interval(2, 3)


_FIELD_OPS = ("add", "sub", "mul", "div")


def _rand_interval(rng):
    scale = 10.0 ** rng.uniform(-12, 12)
    a = rng.uniform(-1, 1) * scale
    b = a + abs(rng.uniform(0, 1)) * scale * 10.0 ** rng.uniform(-16, 0)
    return Interval(min(a, b), max(a, b))


def test_containment_fuzz_field_ops_exact_reference():
    # smaller version of the acceptance fuzz: exact rational reference
    rng = random.Random(20240811)
    for _ in range(20000):
        x = _rand_interval(rng)
        y = _rand_interval(rng)
        op = rng.choice(_FIELD_OPS)
        if op == "div" and y.lo <= 0.0 <= y.hi:
            continue
        out = arithmetic(x, y, op)
        for ex in (Fraction(x.lo), Fraction(x.hi)):
            for ey in (Fraction(y.lo), Fraction(y.hi)):
                if op == "add":
                    true = ex + ey
                elif op == "sub":
                    true = ex - ey
                elif op == "mul":
                    true = ex * ey
                else:
                    true = ex / ey
                assert Fraction(out.lo) <= true <= Fraction(out.hi)


def test_containment_elementary_vs_mpmath():
    import mpmath

    mpmath.mp.dps = 40
    rng = random.Random(7)
    for _ in range(2000):
        x = 10.0 ** rng.uniform(-8, 8)
        iv = Interval(x, x)
        for fn, ref in (
            ("exp", mpmath.exp),
            ("log", mpmath.log),
            ("sqrt", mpmath.sqrt),
        ):
            if fn == "exp" and x > 700:
                continue
            out = elementary(iv, fn)
            true = ref(mpmath.mpf(x))
            assert out.lo <= float(true) <= out.hi


@given(
    st.floats(min_value=-1e8, max_value=1e8, allow_nan=False),
    st.floats(min_value=0, max_value=1.0),
    st.floats(min_value=-1e8, max_value=1e8, allow_nan=False),
    st.floats(min_value=0, max_value=1.0),
)
def test_monotone_width_of_addition(a, wa, b, wb):
    x = Interval(a, a + wa)
    y = Interval(b, b + wb)
    s = x + y
    assert s.width() >= max(x.width(), y.width()) - 1e-8 * max(1.0, abs(a), abs(b))
