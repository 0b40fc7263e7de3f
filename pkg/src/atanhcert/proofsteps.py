"""Auxiliary quantities used by the pencil-and-paper argument.

Two families.  The first studies the concavity gap of ln along the
chord from 1 to x,

    hx(lam) = ln(1 + lam*(x - 1)) - lam*ln(x),

its lambda-derivative, its unique interior peak, and the quadratic
whose roots are the crossings of hc and hd.  The second studies the
excess of the odd symmetric sum over the arctanh sum,

    s(t) = (t1 + t2 + t3 + t1*t2*t3) - (atanh(t1) + atanh(t2) + atanh(t3)),

which is negative whenever the odd symmetric sum is positive.  Each
function is a pure scalar map so every claim about these objects can be
checked pointwise.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from .functions import atanh_sum, odd_sym_sum, _check_unit

_log = logging.getLogger(__name__)

# Below this, (c - d)/(ln c - ln d) is pure cancellation noise.
_DEGENERATE_EPS = 1e-14


class DegenerateCaseError(ValueError):
    """Raised when c and d are too close for the c != d formulas."""


def log_concavity_gap(x: float, lam: float) -> float:
    """ln(1 + lam*(x-1)) - lam*ln(x): how far ln sits above its chord.

    Zero at lam = 0 and lam = 1, positive in between (ln is concave),
    identically zero when x = 1.
    """
    if x <= 0.0:
        raise ValueError(f"need x > 0, got {x!r}")
    em = x - 1.0
    if 1.0 + lam * em <= 0.0:
        raise ValueError(f"chord value 1 + lam*(x-1) <= 0 at x={x!r}, lam={lam!r}")
    return math.log1p(lam * em) - lam * math.log1p(em)


def log_concavity_gap_dlam(x: float, lam: float) -> float:
    """Derivative of log_concavity_gap in lam: (x-1)/(1+lam*(x-1)) - ln x."""
    if x <= 0.0:
        raise ValueError(f"need x > 0, got {x!r}")
    em = x - 1.0
    denom = 1.0 + lam * em
    if denom <= 0.0:
        raise ValueError(f"chord value 1 + lam*(x-1) <= 0 at x={x!r}, lam={lam!r}")
    return em / denom - math.log1p(em)


def log_concavity_gap_peak(x: float) -> float:
    """The unique root of log_concavity_gap_dlam: (x-1-ln x)/((x-1)*ln x).

    The gap increases on [0, peak] and decreases on [peak, 1].  x = 1 is
    rejected: the gap is identically zero there and has no peak.
    """
    if x <= 0.0:
        raise ValueError(f"need x > 0, got {x!r}")
    if x == 1.0:
        raise ValueError("gap is identically zero at x = 1; no peak")
    em = x - 1.0
    lx = math.log1p(em)
    # em - lx loses all digits near x = 1; switch to the series
    # (em**2/2 - em**3/3 + ...) / (em*lx) before that happens.
    if abs(em) < 1e-5:
        num = em * em * (0.5 - em / 3.0 + em * em / 4.0)
    else:
        num = em - lx
    return num / (em * lx)


@dataclass(frozen=True)
class CrossingQuadratic:
    """Quadratic A*lam**2 + B*lam + C whose roots mark where the chord
    gaps of c and d cross: A = (c-1)(d-1), B = c+d-2,
    C = 1 - (c-d)/(ln c - ln d).

    roots is empty (no real roots), length one (linear case A = 0), or
    two in ascending order.  vertex is -B/(2A), None when A = 0.
    """

    A: float
    B: float
    C: float
    roots: tuple[float, ...]
    vertex: float | None


def crossing_quadratic(c: float, d: float) -> CrossingQuadratic:
    """Coefficients and root structure of the crossing quadratic.

    Roots come from the two-branch formula (larger-magnitude root via
    the quadratic formula, companion via C/(A*r)) so nothing cancels
    when B**2 dominates 4*A*C.
    """
    if c <= 0.0 or d <= 0.0:
        raise ValueError(f"need c, d > 0, got c={c!r}, d={d!r}")
    log_ratio = math.log(c) - math.log(d)
    if abs(c - d) < _DEGENERATE_EPS or abs(log_ratio) < _DEGENERATE_EPS:
        raise DegenerateCaseError(f"c and d too close: c={c!r}, d={d!r}")
    a = (c - 1.0) * (d - 1.0)
    b = c + d - 2.0
    cc = 1.0 - (c - d) / log_ratio
    if a == 0.0:
        # One of c, d is 1, so b = other - 1 != 0 here.
        return CrossingQuadratic(a, b, cc, (-cc / b,), None)
    vertex = -b / (2.0 * a)
    disc = b * b - 4.0 * a * cc
    if disc < 0.0:
        return CrossingQuadratic(a, b, cc, (), vertex)
    q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
    if q == 0.0:
        return CrossingQuadratic(a, b, cc, (0.0, 0.0), vertex)
    r1, r2 = q / a, cc / q
    if r1 > r2:
        r1, r2 = r2, r1
    return CrossingQuadratic(a, b, cc, (r1, r2), vertex)


def logmean_below_one(c: float, d: float) -> bool:
    """True iff 0 < c - d < ln c - ln d.

    Equivalently the logarithmic mean of c and d is below 1 while
    c > d; under this condition the chord gap of c stays below the
    chord gap of d on all of [0, 1].
    """
    if c <= 0.0 or d <= 0.0:
        raise ValueError(f"need c, d > 0, got c={c!r}, d={d!r}")
    log_ratio = math.log(c) - math.log(d)
    if abs(c - d) < _DEGENERATE_EPS or abs(log_ratio) < _DEGENERATE_EPS:
        raise DegenerateCaseError(f"c and d too close: c={c!r}, d={d!r}")
    return 0.0 < c - d < log_ratio


def odd_sum_excess(t1: float, t2: float, t3: float) -> float:
    """s(t) = odd_sym_sum(t) - atanh_sum(t), negative whenever the odd
    symmetric sum is positive."""
    return odd_sym_sum(t1, t2, t3) - atanh_sum(t1, t2, t3)


def odd_sum_excess_dt3(t1: float, t2: float, t3: float) -> float:
    """Partial of odd_sum_excess in t3: 1 + t1*t2 - 1/(1 - t3**2)."""
    _check_unit(t1, t2, t3)
    return 1.0 + t1 * t2 - 1.0 / (1.0 - t3 * t3)


def sym_zero_t3(t1: float, t2: float) -> float:
    """The t3 at which the odd symmetric sum vanishes:
    -(t1+t2)/(1+t1*t2).  Always lands back in (-1, 1), and there the
    products prod_plus and prod_minus coincide."""
    _check_unit(t1, t2)
    return -(t1 + t2) / (1.0 + t1 * t2)


def excess_stationary_t3(t1: float, t2: float) -> tuple[float, ...]:
    """t3 values where odd_sum_excess is stationary:
    +-sqrt(t1*t2/(1+t1*t2)), ascending.  Empty when t1*t2 < 0 (the
    stationary points go complex and the excess is monotone)."""
    _check_unit(t1, t2)
    p = t1 * t2
    if p < 0.0:
        return ()
    r = math.sqrt(p / (1.0 + p))
    return (-r, r)


def atanh_cubic_lower_bound(t: float) -> bool:
    """True iff atanh(t) > t + t**3/3 on 0 < t < 1.

    The margin is of order t**5 and drowns in binary64 noise below
    about t = 1e-3; margins inside [-1e-15, 1e-15] are accepted as
    consistent with strictness and logged rather than failed.
    """
    if not 0.0 < t < 1.0:
        raise ValueError(f"need 0 < t < 1, got {t!r}")
    margin = math.atanh(t) - (t + t * t * t / 3.0)
    if margin > 1e-15:
        return True
    if margin >= -1e-15:
        _log.info("cubic bound margin %.3e at t=%r below noise floor; accepting", margin, t)
        return True
    return False
