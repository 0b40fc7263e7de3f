"""Validated certification of a pooled-arctanh inequality.

For t in (-1, 1)^3 and lam in [0, 1], with s = t1 + t2 + t3 + t1*t2*t3,

    s * atanh(lam * s / (1 + lam * e2))  <=  lam * s * sum_i atanh(t_i),

where e2 is the second elementary symmetric polynomial of t.  The
package bounds the gap between the two sides from below by interval
branch and bound (a machine-checkable proof up to a chosen tolerance)
and cross-checks with a high-precision sampling oracle.
"""

from .functions import (
    atanh_sum,
    elem_sym2,
    gap,
    odd_sym_sum,
    pooled_atanh,
    pooled_weighted,
    prod_minus,
    prod_plus,
    self_weighted_atanh_sum,
    sign_averaged_weighted_sum,
    weighted_atanh_sum,
)
from .interval import Interval

__all__ = [
    "Interval",
    "atanh_sum",
    "elem_sym2",
    "gap",
    "odd_sym_sum",
    "pooled_atanh",
    "pooled_weighted",
    "prod_minus",
    "prod_plus",
    "self_weighted_atanh_sum",
    "sign_averaged_weighted_sum",
    "weighted_atanh_sum",
]

__version__ = "1.0.0"
