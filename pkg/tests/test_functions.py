"""Point evaluators, their frozen oracle values, and the float/interval
polymorphism contract.

The frozen constants below were produced by a 40-digit mpmath
evaluation, independent of the binary64 code under test.
"""

import math

import numpy as np
import pytest

from atanhcert.functions import (
    atanh_sum,
    elem_sym2,
    gap,
    odd_sym_sum,
    pooled_atanh,
    pooled_atanh_direct,
    pooled_weighted,
    prod_minus,
    prod_plus,
    self_weighted_atanh_sum,
    sign_averaged_weighted_sum,
    stable_atanh,
    weighted_atanh_sum,
)
from atanhcert.interval import Interval, atanh_point

# Reference values at lam = 0.5, t = (0.5, 0.5, 0.5).
F_POOLED = 0.6790617420765971  # 0.5 * ln(2.1875 / 0.5625)
G_POOLED = 1.1034753308744703  # 1.625 * F_POOLED
GAP_VALUE = 0.23545839593978832
F_SUM = 1.6479184330021645  # 3 * atanh(0.5)
HALF_LN3 = 0.5493061443340548


def test_exact_rational_values():
    assert odd_sym_sum(0.5, 0.5, 0.5) == 1.625
    assert odd_sym_sum(0.0, 0.0, 0.0) == 0.0
    assert odd_sym_sum(0.7, -0.7, 0.0) == 0.0
    assert elem_sym2(0.5, 0.5, 0.5) == 0.75
    assert elem_sym2(0.0, 0.0, 0.0) == 0.0
    assert prod_plus(0.5, 0.5, 0.5) == 3.375
    assert prod_minus(0.5, 0.5, 0.5) == 0.125
    assert prod_plus(0.0, 0.0, 0.0) == 1.0
    assert prod_minus(0.0, 0.0, 0.0) == 1.0


def test_product_facts_at_half():
    c = prod_plus(0.5, 0.5, 0.5)
    d = prod_minus(0.5, 0.5, 0.5)
    assert c + d == 2.0 * (1.0 + elem_sym2(0.5, 0.5, 0.5))  # 3.5
    assert c - d == 2.0 * odd_sym_sum(0.5, 0.5, 0.5)  # 3.25


def test_atanh_sum_values():
    assert atanh_sum(0.0, 0.0, 0.0) == 0.0
    assert abs(atanh_sum(0.5, 0.0, 0.0) - HALF_LN3) <= 1e-15
    assert abs(atanh_sum(0.5, 0.5, 0.5) - F_SUM) <= 2e-15
    assert abs(atanh_sum(0.8, -0.8, 0.0)) <= 1e-15


def test_frozen_pooled_values():
    assert abs(pooled_atanh(0.5, 0.5, 0.5, 0.5) - F_POOLED) <= 1e-15
    assert abs(pooled_weighted(0.5, 0.5, 0.5, 0.5) - G_POOLED) <= 2e-15
    assert abs(gap(0.5, 0.5, 0.5, 0.5) - GAP_VALUE) <= 2e-15
    assert abs(weighted_atanh_sum(0.5, 0.5, 0.5) - 1.625 * F_SUM) <= 4e-15


def test_pooled_endpoints():
    assert pooled_atanh(0.0, 0.5, 0.5, 0.5) == 0.0
    assert abs(pooled_atanh(1.0, 0.5, 0.5, 0.5) - atanh_sum(0.5, 0.5, 0.5)) <= 2e-15
    assert abs(pooled_atanh(1.0, -0.3, 0.8, 0.1) - atanh_sum(-0.3, 0.8, 0.1)) <= 2e-15


def test_gap_on_equality_manifold():
    # lam = 0 and sigma = 0 are exact zeros of the float formula; lam = 1
    # only cancels to rounding noise because f and F take different paths.
    assert gap(0.0, 0.5, 0.5, 0.5) == 0.0
    assert gap(0.37, 0.6, -0.6, 0.0) == 0.0
    assert abs(gap(1.0, 0.5, 0.5, 0.5)) <= 1e-14
    rng = np.random.default_rng(1)
    for _ in range(200):
        t = rng.uniform(-0.95, 0.95, 2)
        assert gap(0.0, t[0], t[1], 0.2) == 0.0
        assert abs(gap(1.0, t[0], t[1], 0.2)) <= 1e-13


def test_gap_nonnegative_spot_fuzz():
    rng = np.random.default_rng(42)
    lam = rng.uniform(0.0, 1.0, 20_000)
    t = rng.uniform(-0.95, 0.95, (3, 20_000))
    worst = min(gap(lam[i], t[0, i], t[1, i], t[2, i]) for i in range(20_000))
    assert worst >= -1e-11


def test_pooled_log_form_vs_direct():
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(20_000):
        lam = float(rng.uniform())
        t1, t2, t3 = rng.uniform(-0.99, 0.99, 3)
        worst = max(worst, abs(pooled_atanh(lam, t1, t2, t3) - pooled_atanh_direct(lam, t1, t2, t3)))
    assert worst <= 1e-12


def test_sign_average_identity_spot():
    rng = np.random.default_rng(4)
    for _ in range(5000):
        t1, t2, t3 = rng.uniform(-0.99, 0.99, 3)
        lhs = sign_averaged_weighted_sum(t1, t2, t3)
        rhs = self_weighted_atanh_sum(t1, t2, t3)
        assert abs(lhs - rhs) <= 1e-12


@pytest.mark.parametrize("bad", [1.0, -1.0, 1.5, -2.0])
def test_domain_rejection(bad):
    with pytest.raises(ValueError):
        atanh_sum(bad, 0.0, 0.0)
    with pytest.raises(ValueError):
        pooled_atanh(0.5, 0.0, bad, 0.0)
    with pytest.raises(ValueError):
        self_weighted_atanh_sum(0.0, 0.0, bad)
    with pytest.raises(ValueError):
        stable_atanh(bad)


def test_stable_atanh_is_fused_kernel():
    for x in (-0.9, -0.5, 0.0, 1e-12, 0.3, 0.99):
        assert stable_atanh(x) == atanh_point(x)


_POINT_FNS = [
    lambda lam, t1, t2, t3: odd_sym_sum(t1, t2, t3),
    lambda lam, t1, t2, t3: elem_sym2(t1, t2, t3),
    lambda lam, t1, t2, t3: prod_plus(t1, t2, t3),
    lambda lam, t1, t2, t3: prod_minus(t1, t2, t3),
    lambda lam, t1, t2, t3: atanh_sum(t1, t2, t3),
    pooled_atanh,
    lambda lam, t1, t2, t3: weighted_atanh_sum(t1, t2, t3),
    pooled_weighted,
    gap,
    lambda lam, t1, t2, t3: self_weighted_atanh_sum(t1, t2, t3),
    lambda lam, t1, t2, t3: sign_averaged_weighted_sum(t1, t2, t3),
]


def test_interval_variant_contains_point_values():
    # Degenerate intervals: every evaluator must bracket its own float
    # result at the same point.
    rng = np.random.default_rng(5)
    for _ in range(400):
        lam = float(rng.uniform())
        t = [float(v) for v in rng.uniform(-0.97, 0.97, 3)]
        ivs = [Interval(v, v) for v in t]
        lam_iv = Interval(lam, lam)
        for fn in _POINT_FNS:
            point = fn(lam, *t)
            enc = fn(lam_iv, *ivs)
            assert isinstance(enc, Interval)
            assert enc.lo <= point <= enc.hi
            assert enc.width <= 1e-12 * max(1.0, abs(point))


def test_wide_interval_contains_member_evaluations():
    lam_iv = Interval(0.2, 0.6)
    t_iv = (Interval(-0.4, -0.1), Interval(0.1, 0.5), Interval(0.3, 0.7))
    rng = np.random.default_rng(6)
    enc = {fn: fn(lam_iv, *t_iv) for fn in _POINT_FNS}
    for _ in range(300):
        lam = float(rng.uniform(lam_iv.lo, lam_iv.hi))
        t = [float(rng.uniform(iv.lo, iv.hi)) for iv in t_iv]
        for fn in _POINT_FNS:
            assert enc[fn].contains(fn(lam, *t))
