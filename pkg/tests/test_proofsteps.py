"""Chord-gap machinery and the odd-sum excess."""

import math

import mpmath as mp
import numpy as np
import pytest

from atanhcert import proofsteps
from atanhcert.proofsteps import (
    CrossingQuadratic,
    DegenerateCaseError,
    atanh_cubic_lower_bound,
    crossing_quadratic,
    excess_stationary_t3,
    log_concavity_gap,
    log_concavity_gap_dlam,
    log_concavity_gap_peak,
    logmean_below_one,
    odd_sum_excess,
    odd_sum_excess_dt3,
    sym_zero_t3,
)

XS = np.exp(np.linspace(math.log(1e-3), math.log(1e3), 97))


def test_chord_gap_endpoints_zero():
    for x in XS:
        assert abs(log_concavity_gap(float(x), 0.0)) <= 1e-14
        assert abs(log_concavity_gap(float(x), 1.0)) <= 1e-14


def test_chord_gap_identically_zero_at_one():
    for lam in np.linspace(0.0, 1.0, 11):
        assert log_concavity_gap(1.0, float(lam)) == 0.0


def test_chord_gap_positive_interior():
    # ln is strictly concave, so the chord sits strictly below it.
    for x in XS:
        if x == 1.0:
            continue
        for lam in (0.1, 0.5, 0.9):
            assert log_concavity_gap(float(x), lam) > 0.0


def test_chord_gap_domain_errors():
    with pytest.raises(ValueError):
        log_concavity_gap(0.0, 0.5)
    with pytest.raises(ValueError):
        log_concavity_gap(-2.0, 0.5)
    # chord argument goes nonpositive only for lam outside [0, 1]
    with pytest.raises(ValueError):
        log_concavity_gap(0.1, 1.2)
    with pytest.raises(ValueError):
        log_concavity_gap_dlam(0.1, 1.2)


def test_chord_gap_derivative_matches_central_difference():
    rng = np.random.default_rng(10)
    step = 1e-6
    for _ in range(2000):
        x = float(np.exp(rng.uniform(math.log(1e-2), math.log(1e2))))
        lam = float(rng.uniform(step, 1.0 - step))
        central = (log_concavity_gap(x, lam + step) - log_concavity_gap(x, lam - step)) / (
            2.0 * step
        )
        exact = log_concavity_gap_dlam(x, lam)
        assert abs(exact - central) <= 1e-6 * max(1.0, abs(exact))


def test_peak_zeroes_derivative():
    for x in XS:
        if x == 1.0:
            continue
        peak = log_concavity_gap_peak(float(x))
        assert 0.0 < peak < 1.0
        assert abs(log_concavity_gap_dlam(float(x), peak)) <= 1e-12


def test_peak_closed_form_at_e():
    # (x - 1 - ln x)/((x - 1) ln x) at x = e
    expected = (math.e - 2.0) / (math.e - 1.0)
    assert abs(log_concavity_gap_peak(math.e) - expected) <= 1e-15


def test_peak_series_branch_agrees_with_high_precision():
    # The direct formula loses all digits near x = 1; compare both
    # branches against a 50-digit evaluation across the switch at 1e-5.
    with mp.workdps(50):
        for em in (3e-6, -3e-6, 8e-6, 2e-5, -2e-5, 9e-5):
            x = 1.0 + em
            xm = mp.mpf(x)
            ref = (xm - 1 - mp.log(xm)) / ((xm - 1) * mp.log(xm))
            assert abs(log_concavity_gap_peak(x) - float(ref)) <= 1e-10


def test_peak_rejects_one_and_nonpositive():
    with pytest.raises(ValueError):
        log_concavity_gap_peak(1.0)
    with pytest.raises(ValueError):
        log_concavity_gap_peak(0.0)


@pytest.mark.parametrize(
    "c,d",
    [(3.0, 0.5), (1.4, 0.2), (0.9, 0.3), (5.0, 2.0), (0.8, 0.01), (1.01, 0.99)],
)
def test_crossing_quadratic_structure(c, d):
    qa = crossing_quadratic(c, d)
    assert isinstance(qa, CrossingQuadratic)
    assert qa.A == (c - 1.0) * (d - 1.0)
    assert qa.B == c + d - 2.0
    assert qa.C == 1.0 - (c - d) / (math.log(c) - math.log(d))
    scale = max(1.0, abs(qa.A), abs(qa.B), abs(qa.C))
    for r in qa.roots:
        assert abs(qa.A * r * r + qa.B * r + qa.C) <= 1e-12 * scale
    if qa.A != 0.0:
        assert qa.vertex == -qa.B / (2.0 * qa.A)
        if len(qa.roots) == 2:
            r1, r2 = qa.roots
            assert r1 <= qa.vertex <= r2
            assert abs(r1 * r2 - qa.C / qa.A) <= 1e-9 * max(1.0, abs(qa.C / qa.A))


def test_crossing_quadratic_linear_case():
    qa = crossing_quadratic(1.0, 0.4)
    assert qa.A == 0.0 and qa.vertex is None
    assert len(qa.roots) == 1
    assert abs(qa.B * qa.roots[0] + qa.C) <= 1e-12


def test_crossing_quadratic_degenerate_and_domain():
    with pytest.raises(DegenerateCaseError):
        crossing_quadratic(0.7, 0.7)
    with pytest.raises(DegenerateCaseError):
        crossing_quadratic(0.7, 0.7 + 1e-15)
    with pytest.raises(ValueError):
        crossing_quadratic(-1.0, 0.5)
    with pytest.raises(ValueError):
        crossing_quadratic(0.5, 0.0)


def test_logmean_below_one_known_cases():
    assert logmean_below_one(1.05, 0.7)  # c - d = 0.35 < ln(1.5)
    assert not logmean_below_one(3.0, 1.0 / 3.0)  # log-mean above 1
    assert not logmean_below_one(0.7, 1.05)  # needs c > d
    with pytest.raises(DegenerateCaseError):
        logmean_below_one(0.5, 0.5)
    with pytest.raises(ValueError):
        logmean_below_one(0.5, -0.5)


def test_logmean_predicate_matches_definition():
    rng = np.random.default_rng(12)
    for _ in range(5000):
        c = float(np.exp(rng.uniform(-3.0, 1.0)))
        d = float(np.exp(rng.uniform(-3.0, 1.0)))
        if abs(c - d) < 1e-12:
            continue
        expected = 0.0 < c - d < math.log(c) - math.log(d)
        assert logmean_below_one(c, d) == expected


def test_excess_odd_symmetry_and_sign():
    rng = np.random.default_rng(13)
    for _ in range(3000):
        t1, t2, t3 = (float(v) for v in rng.uniform(-0.95, 0.95, 3))
        s = t1 + t2 + t3 + t1 * t2 * t3
        ex = odd_sum_excess(t1, t2, t3)
        assert abs(ex + odd_sum_excess(-t1, -t2, -t3)) <= 1e-13
        if s > 1e-9:
            assert ex < 0.0
        elif s < -1e-9:
            assert ex > 0.0


def test_excess_vanishes_at_sigma_root():
    rng = np.random.default_rng(14)
    for _ in range(3000):
        t1 = float(rng.uniform(-0.95, 0.95))
        t2 = float(rng.uniform(-0.95, 0.95))
        t3 = sym_zero_t3(t1, t2)
        assert -1.0 < t3 < 1.0
        s = t1 + t2 + t3 + t1 * t2 * t3
        assert abs(s) <= 5e-15
        assert abs(odd_sum_excess(t1, t2, t3)) <= 1e-12
        # with sigma = 0 the two products coincide
        c = (1 + t1) * (1 + t2) * (1 + t3)
        d = (1 - t1) * (1 - t2) * (1 - t3)
        assert abs(c - d) <= 1e-13


def test_excess_derivative_matches_central_difference():
    rng = np.random.default_rng(15)
    step = 1e-6
    for _ in range(2000):
        t1, t2 = (float(v) for v in rng.uniform(-0.9, 0.9, 2))
        t3 = float(rng.uniform(-0.9, 0.9))
        central = (odd_sum_excess(t1, t2, t3 + step) - odd_sum_excess(t1, t2, t3 - step)) / (
            2.0 * step
        )
        exact = odd_sum_excess_dt3(t1, t2, t3)
        assert abs(exact - central) <= 1e-5 * max(1.0, abs(exact))


def test_stationary_points_real_iff_same_sign():
    rng = np.random.default_rng(16)
    for _ in range(4000):
        t1, t2 = (float(v) for v in rng.uniform(-0.99, 0.99, 2))
        pts = excess_stationary_t3(t1, t2)
        if t1 * t2 >= 0.0:
            assert len(pts) == 2
            assert pts[0] == -pts[1] and pts[0] <= pts[1]
            for r in pts:
                assert abs(odd_sum_excess_dt3(t1, t2, r)) <= 1e-12
        else:
            assert pts == ()


def test_stationary_points_at_zero_pair():
    assert excess_stationary_t3(0.0, 0.5) == (0.0, 0.0)


def test_atanh_cubic_bound():
    for t in np.geomspace(1e-3, 1.0 - 1e-3, 500):
        assert atanh_cubic_lower_bound(float(t))
    # visible margin at a generic point
    assert math.atanh(0.5) - (0.5 + 0.125 / 3.0) > 7e-3
    with pytest.raises(ValueError):
        atanh_cubic_lower_bound(0.0)
    with pytest.raises(ValueError):
        atanh_cubic_lower_bound(1.0)
    with pytest.raises(ValueError):
        atanh_cubic_lower_bound(-0.5)


def test_domain_guards_on_excess_helpers():
    with pytest.raises(ValueError):
        odd_sum_excess_dt3(1.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        sym_zero_t3(0.0, -1.0)
    with pytest.raises(ValueError):
        excess_stationary_t3(1.5, 0.1)
