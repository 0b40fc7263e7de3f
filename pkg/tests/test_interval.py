"""Interval construction, arithmetic, and the containment contract."""

import math
import pickle

import mpmath as mp
import numpy as np
import pytest

from atanhcert.interval import (
    Interval,
    add,
    atanh_iv,
    atanh_point,
    div,
    ln_iv,
    make,
    mul,
    neg,
    next_down,
    next_up,
    split,
    square,
    sub,
)

HALF_LN3 = 0.5493061443340548  # atanh(0.5)


def test_make_basic():
    x = make(0.0, 1.0)
    assert x.lo == 0.0 and x.hi == 1.0
    p = make(0.5, 0.5)
    assert p.lo == p.hi == 0.5
    assert p.width == 0.0


@pytest.mark.parametrize(
    "lo,hi",
    [(1.0, 0.0), (math.nan, 0.0), (0.0, math.nan), (-math.inf, 0.0), (0.0, math.inf)],
)
def test_make_rejects_bad_endpoints(lo, hi):
    with pytest.raises(ValueError):
        make(lo, hi)


def test_immutable():
    x = Interval(0.0, 1.0)
    with pytest.raises(AttributeError):
        x.lo = 2.0


def test_mid_width_contains():
    x = Interval(-1.0, 3.0)
    assert x.mid == 1.0
    assert x.width == 4.0
    assert x.contains(-1.0) and x.contains(3.0) and x.contains(0.7)
    assert not x.contains(3.0000001)


def test_eq_hash_pickle():
    x = Interval(-0.25, 0.75)
    assert x == Interval(-0.25, 0.75)
    assert x != Interval(-0.25, 0.5)
    assert hash(x) == hash(Interval(-0.25, 0.75))
    assert pickle.loads(pickle.dumps(x)) == x


def test_add_sub_contain_exact_result():
    x = Interval(-1.0, 1.0)
    y = Interval(-1.0, 1.0)
    s = add(x, y)
    assert s.lo <= -2.0 <= 2.0 <= s.hi
    assert s.hi - 2.0 <= 1e-14 and -2.0 - s.lo <= 1e-14
    d = sub(Interval(1.0, 2.0), Interval(0.5, 0.75))
    assert d.lo <= 0.25 and 1.5 <= d.hi


def test_scalar_coercion():
    x = Interval(1.0, 2.0)
    assert (x + 1).contains(3.0)
    assert (1 + x).contains(2.0)
    assert (2 - x).contains(0.0) and (2 - x).contains(1.0)
    assert (x * 2).contains(4.0)
    assert (1.0 / x).contains(0.5) and (1.0 / x).contains(1.0)


def test_neg_exact():
    x = Interval(-0.3, 0.7)
    n = neg(x)
    assert n.lo == -0.7 and n.hi == 0.3
    assert neg(n) == x  # no widening on the round trip


def test_mul_sign_cases():
    assert mul(Interval(1, 2), Interval(3, 4)).contains(3.0)
    assert mul(Interval(1, 2), Interval(3, 4)).contains(8.0)
    m = mul(Interval(-1, 2), Interval(-3, 4))
    for v in (-6.0, 8.0, 3.0, -4.0, 0.0):
        assert m.contains(v)
    assert m.lo >= -6.0 - 1e-14 and m.hi <= 8.0 + 1e-14


def test_div_basic_and_straddle():
    q = div(Interval(1.0, 1.0), Interval(2.0, 4.0))
    assert q.contains(0.25) and q.contains(0.5)
    with pytest.raises(ZeroDivisionError):
        div(Interval(1.0, 1.0), Interval(-1.0, 1.0))
    with pytest.raises(ZeroDivisionError):
        div(Interval(1.0, 1.0), Interval(0.0, 0.0))
    with pytest.raises(ZeroDivisionError):
        div(Interval(1.0, 1.0), Interval(0.0, 2.0))


def test_square_tight_at_zero_crossing():
    s = square(Interval(-2.0, 3.0))
    assert s.lo == 0.0
    assert s.contains(9.0) and s.hi <= 9.0 + 1e-13
    # x*x cannot know both factors are the same variable
    assert mul(Interval(-2.0, 3.0), Interval(-2.0, 3.0)).lo < 0.0
    pos = square(Interval(2.0, 3.0))
    assert pos.lo > 0.0 and pos.contains(4.0) and pos.contains(9.0)
    negside = square(Interval(-3.0, -2.0))
    assert negside.contains(4.0) and negside.contains(9.0)


def test_ln_iv():
    one = ln_iv(Interval(1.0, 1.0))
    assert one.contains(0.0)
    assert one.width < 1e-320  # two subnormal steps each way
    e = ln_iv(Interval(math.e, math.e))
    assert e.contains(1.0)
    with pytest.raises(ValueError):
        ln_iv(Interval(0.0, 1.0))
    with pytest.raises(ValueError):
        ln_iv(Interval(-1.0, 1.0))


def test_atanh_iv():
    z = atanh_iv(Interval(0.0, 0.0))
    assert z.contains(0.0)
    h = atanh_iv(Interval(0.5, 0.5))
    assert h.contains(HALF_LN3)
    sym = atanh_iv(Interval(-0.5, 0.5))
    assert sym.lo == -sym.hi  # oddness survives the directed rounding
    assert sym.contains(-HALF_LN3) and sym.contains(HALF_LN3)
    with pytest.raises(ValueError):
        atanh_iv(Interval(-1.0, 0.0))
    with pytest.raises(ValueError):
        atanh_iv(Interval(0.0, 1.0))


def test_atanh_point_matches_libm():
    for x in np.linspace(-0.999, 0.999, 1201):
        x = float(x)
        ref = math.atanh(x)
        assert abs(atanh_point(x) - ref) <= 4.0 * abs(math.ulp(ref)) + 5e-324
    # the log1p form keeps full precision where 1 + x would round
    assert atanh_point(1e-18) == 1e-18


def test_split_exact_cases():
    a, b = split(Interval(0.0, 1.0))
    assert (a.lo, a.hi, b.lo, b.hi) == (0.0, 0.5, 0.5, 1.0)
    a, b = split(Interval(-1.0, 1.0))
    assert (a.lo, a.hi, b.lo, b.hi) == (-1.0, 0.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        split(Interval(0.5, 0.5))
    # one-ulp interval: no float strictly between the endpoints
    with pytest.raises(ValueError):
        split(Interval(1.0, next_up(1.0)))
    a, b = split(Interval(1.0, next_up(next_up(1.0))))
    assert a.hi == b.lo == next_up(1.0)


def test_next_down_up_are_one_step():
    assert next_up(1.0) > 1.0
    assert next_down(1.0) < 1.0
    assert next_up(next_down(1.0)) == 1.0


def _random_interval(rng) -> Interval:
    a, b = sorted(rng.normal(0.0, 10.0, 2))
    return Interval(a, b)


def test_containment_fuzz_arithmetic():
    # 50k mixed operations; the million-case version runs in the
    # acceptance suite.
    rng = np.random.default_rng(2024)
    checked = 0
    while checked < 50_000:
        x = _random_interval(rng)
        y = _random_interval(rng)
        px = float(rng.uniform(x.lo, x.hi))
        py = float(rng.uniform(y.lo, y.hi))
        assert (x + y).contains(px + py)
        assert (x - y).contains(px - py)
        assert (x * y).contains(px * py)
        assert square(x).contains(px * px)
        if not y.lo <= 0.0 <= y.hi:
            assert (x / y).contains(px / py)
            checked += 1
        checked += 4


def test_containment_vs_mpmath_transcendentals():
    rng = np.random.default_rng(7)
    with mp.workdps(40):
        for _ in range(2000):
            a, b = sorted(rng.uniform(-0.999, 0.999, 2))
            x = Interval(float(a), float(b))
            p = float(rng.uniform(x.lo, x.hi))
            enc = atanh_iv(x)
            ref = mp.atanh(p)
            assert enc.lo <= ref <= enc.hi
        for _ in range(2000):
            a, b = sorted(rng.uniform(1e-6, 10.0, 2))
            x = Interval(float(a), float(b))
            p = float(rng.uniform(x.lo, x.hi))
            enc = ln_iv(x)
            ref = mp.log(p)
            assert enc.lo <= ref <= enc.hi


def test_widening_never_exceeds_four_ulp():
    rng = np.random.default_rng(11)
    for _ in range(5000):
        x = _random_interval(rng)
        y = _random_interval(rng)
        s = x + y
        raw_lo, raw_hi = x.lo + y.lo, x.hi + y.hi
        assert abs(s.lo - raw_lo) <= 4 * math.ulp(raw_lo) + 5e-324
        assert abs(s.hi - raw_hi) <= 4 * math.ulp(raw_hi) + 5e-324
