"""Evaluators for the pooled-arctanh gap and its building blocks.

For t = (t1, t2, t3) in (-1, 1)^3 and a pooling weight lam in [0, 1] the
central quantity is

    gap(lam, t) = odd_sym_sum(t) * (lam * atanh_sum(t) - pooled_atanh(lam, t))

which is nonnegative on the whole domain and zero exactly on lam = 0,
lam = 1, and the surface odd_sym_sum(t) = 0.  Every public function here
accepts either floats or :class:`~atanhcert.interval.Interval` endpoints
under the same name; interval inputs produce rigorous enclosures.

The log-product identities used throughout:

    atanh_sum(t)        = 0.5 * (ln(prod_plus) - ln(prod_minus))
    pooled_atanh(lam,t) = 0.5 * ln(((1-lam) + lam*prod_plus) /
                                   ((1-lam) + lam*prod_minus))
    prod_plus - prod_minus = 2 * odd_sym_sum
    prod_plus + prod_minus = 2 * (1 + elem_sym2)

Both pooled denominators (1-lam) + lam*prod are convex combinations of
positive numbers, so the rigorous path never divides by or takes the log
of anything that can straddle zero.
"""

from __future__ import annotations

import math

from .interval import Interval, atanh_iv, atanh_point, ln_iv


def _is_iv(*xs) -> bool:
    return any(isinstance(x, Interval) for x in xs)


def _check_unit(*ts) -> None:
    for t in ts:
        if not -1.0 < t < 1.0:
            raise ValueError(f"t components must lie in (-1, 1), got {t}")


def odd_sym_sum(t1, t2, t3):
    """e1 + e3: the odd elementary symmetric part, t1+t2+t3 + t1*t2*t3."""
    return t1 + t2 + t3 + t1 * t2 * t3


def elem_sym2(t1, t2, t3):
    """Second elementary symmetric polynomial t1*t2 + t2*t3 + t3*t1."""
    return t1 * t2 + t2 * t3 + t3 * t1


def prod_plus(t1, t2, t3):
    """(1+t1)(1+t2)(1+t3)."""
    return (1 + t1) * (1 + t2) * (1 + t3)


def prod_minus(t1, t2, t3):
    """(1-t1)(1-t2)(1-t3)."""
    return (1 - t1) * (1 - t2) * (1 - t3)


def atanh_sum(t1, t2, t3):
    """arctanh(t1) + arctanh(t2) + arctanh(t3).

    The point variant sums arctanh directly; the interval variant goes
    through the log-of-products form, whose factors stay well away from
    the arctanh poles.
    """
    if _is_iv(t1, t2, t3):
        c = prod_plus(t1, t2, t3)
        d = prod_minus(t1, t2, t3)
        return (ln_iv(c) - ln_iv(d)) * 0.5
    _check_unit(t1, t2, t3)
    return math.atanh(t1) + math.atanh(t2) + math.atanh(t3)


def pooled_atanh(lam, t1, t2, t3):
    """arctanh of the lam-pooled argument, via the log-ratio form.

    Equal to arctanh(lam*s / (1 + lam*e2)) with s = odd_sym_sum and
    e2 = elem_sym2, but computed as
    0.5 * ln(((1-lam) + lam*prod_plus) / ((1-lam) + lam*prod_minus))
    in both variants so the two paths share their conditioning.
    """
    c = prod_plus(t1, t2, t3)
    d = prod_minus(t1, t2, t3)
    nc = (1 - lam) + lam * c
    nd = (1 - lam) + lam * d
    if _is_iv(lam, t1, t2, t3):
        return (ln_iv(nc) - ln_iv(nd)) * 0.5
    _check_unit(t1, t2, t3)
    return 0.5 * (math.log(nc) - math.log(nd))


def pooled_atanh_direct(lam, t1, t2, t3):
    """Point-arithmetic cross-check: arctanh(lam*s / (1 + lam*e2)).

    Kept only to confirm the log form against the rational-argument
    form; not used on the rigorous path.
    """
    _check_unit(t1, t2, t3)
    s = odd_sym_sum(t1, t2, t3)
    return math.atanh(lam * s / (1 + lam * elem_sym2(t1, t2, t3)))


def weighted_atanh_sum(t1, t2, t3):
    """odd_sym_sum(t) * atanh_sum(t)."""
    return odd_sym_sum(t1, t2, t3) * atanh_sum(t1, t2, t3)


def pooled_weighted(lam, t1, t2, t3):
    """odd_sym_sum(t) * pooled_atanh(lam, t)."""
    return odd_sym_sum(t1, t2, t3) * pooled_atanh(lam, t1, t2, t3)


def gap(lam, t1, t2, t3):
    """lam * weighted_atanh_sum - pooled_weighted, factored so the
    odd_sym_sum prefactor appears exactly once."""
    s = odd_sym_sum(t1, t2, t3)
    return s * (lam * atanh_sum(t1, t2, t3) - pooled_atanh(lam, t1, t2, t3))


def self_weighted_atanh_sum(t1, t2, t3):
    """t1*arctanh(t1) + t2*arctanh(t2) + t3*arctanh(t3)."""
    if _is_iv(t1, t2, t3):
        return t1 * atanh_iv(t1) + t2 * atanh_iv(t2) + t3 * atanh_iv(t3)
    _check_unit(t1, t2, t3)
    return t1 * math.atanh(t1) + t2 * math.atanh(t2) + t3 * math.atanh(t3)


def sign_averaged_weighted_sum(t1, t2, t3):
    """Quarter-average of weighted_atanh_sum over sign flips of t2, t3.

    Because x*arctanh(x) is even, this equals self_weighted_atanh_sum
    exactly; the pair forms a cross-checkable identity.
    """
    return 0.25 * (
        weighted_atanh_sum(t1, t2, t3)
        + weighted_atanh_sum(t1, -t2, t3)
        + weighted_atanh_sum(t1, t2, -t3)
        + weighted_atanh_sum(t1, -t2, -t3)
    )


def stable_atanh(x: float) -> float:
    """Point arctanh through the fused log-of-ratio kernel."""
    _check_unit(x)
    return atanh_point(x)
