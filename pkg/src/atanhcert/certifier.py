"""Branch-and-bound certification of the pooled-arctanh inequality.

The certified statement, relaxed mode: gap(lam, t) >= -epsilon for every
lam in [0, 1] and t in [-1+delta, 1-delta]^3, witnessed by a finite
cover of boxes, each carrying a rigorous interval lower bound.  Strict
mode: gap > 0 on the interior sub-domain {lam in [m, 1-m],
odd_sym_sum(t) >= sigma_min}; the mirrored half odd_sym_sum <= -sigma_min
follows because gap(lam, -t) = gap(lam, t).

The gap vanishes on lam = 0, lam = 1, and the surface odd_sym_sum = 0,
and vanishes quadratically across the last one, so the natural interval
extension alone cannot decide boxes near those sets at any useful width.
Each box therefore gets the best of ten enclosures:

  excess-drop  gap >= lam^2 * s^2 * kappa / n with
             kappa = e2 - lam*s^2*B(u)/n^2, valid because the dropped
             first term lam*s*(f - s) is pointwise nonnegative: for
             s > 0 it says the logarithmic mean of (c, d) stays below 1,
             which holds since cd <= 1, and odd symmetry covers s < 0.
             No logs, no division by a vanishing factor; kappa.lo >= 0
             settles a box around the surface f = s at every lam at
             once, so it runs first;
  natural    gap = s * (lam*f - F), straight off the log forms;
  product    gap = lam * s^2 * W,
             W = R(z)/m - R(u)/n with R(y) = atanh(y)/y, m = 1 + e2,
             z = s/m, n = (1-lam) + lam*m, u = lam*s/n.  R >= 1 and the
             three factors are separately sign-definite, so boxes
             touching lam = 0 or s = 0 still get a bound with the
             right sign.  z and u are enclosed through the monotone
             ratios (c-d)/(c+d) and (nc-nd)/(nc+nd), which stay inside
             (-1, 1) by construction even where the enclosure of m is
             wide relative to its tiny value (the edge corners);
  coupled    the same W, rewritten through the exact identities
             z^2 - u^2 = s^2 (1-lam)(n + lam*m) / (m n)^2 and
             e2 = (t1+t2+t3)^2/3 - r/2, where r >= 0 is the mean of the
             squared pairwise differences.  Interval arithmetic cannot
             see that e2 is dominated by s^2 near t = 0; this form
             encodes it, so its defect falls like width^4 in the tube
             around the diagonal instead of width^1;
  lambda-linear  gap = lam * s * V,
             V = (f - s) + lam*s*(e2 - lam*s^2*B(u)/n^2)/n with
             B(y) = (atanh(y)/y - 1)/y^2, and f - s enclosed as
             sum_i (atanh(t_i) - t_i) - t1*t2*t3, one tight monotone
             excess per axis.  On the surface f = s (equivalently
             atanh(z) = z*m) the gap falls to second order in lam and
             the product family needs t-widths ~ lam * e2; this form
             keeps the f - s cancellation exact and decides those
             boxes at moderate width;
  factored mirror  gap = mu * s^2 * W2 with mu = 1 - lam,
             p = (1-t1^2)(1-t2^2)(1-t3^2) and
             W2 = R(ut)/(p*nt) - R(z)/m, an exact identity at every lam
             (s*f = s^2 R(z)/m).  p sits only under the nonnegative
             addend, so W2.lo >= 0 decides the whole remaining lam
             range of a box touching lam = 1, and the splitter is told
             to refine t instead of lam there;
  mirror linear  gap = mu * (s^2 R(ut)/(p*nt) - s*f), the same identity
             with the log-based s*f, which is the tighter subtrahend on
             cells whose m enclosure collapses (the corner e2 -> -1);
             its defect is only mu * (s*f), which resolves the sliver
             hugging lam = 1 where lam can no longer split;
  reflected  the product factoring around lam = 1: with st = -s/p,
             mt = m/p, gap = -(mu * s^2 * Wt) / p where Wt is W built
             from (mu, st, mt).  Kills the cancellation of lam*f - F as
             lam -> 1;
  coupled reflected  the coupling rewrite of Wt, using
             mt - 1 = ((t1+t2+t3)^2 + q)/2 - e22 + e3^2 over p with
             q the sum of squares and e22 the pair products of the
             t_i^2;
  mean value gap(mid) + sum_i dgap/dx_i(Box) * (Box_i - mid_i), which
             shrinks quadratically with box width and cleans up what
             the algebraic forms leave.

When every form abstains but the four partial derivatives hold one
sign across the box, the minimum lies on the corresponding face; the
box is pinned there and the battery reruns on the face (monotone face
reduction, cascaded a few rounds).

Every form is conservative: when a precondition fails on a fat box
(a log argument or denominator enclosure touching zero), the form
abstains and the box splits.

Determinism: the root box is pre-split into a fixed set of partitions,
each processed depth-first.  The box budget is handed out in rounds of
fixed quotas computed only from the remaining budget and the set of
still-active partitions, so hard partitions inherit whatever the easy
ones do not use, and the schedule is a pure function of the config.
The merge is independent of worker scheduling, so any --threads value
produces the identical certificate.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .functions import elem_sym2, gap as gap_fn, odd_sym_sum, prod_minus, prod_plus
from .interval import Interval, atanh_iv, ln_iv, next_down, next_up, split, square
from .oracle import SamplePoint, reference_eval

_PARTITION_LEVELS = 6


@dataclass(frozen=True)
class Box:
    lam: Interval
    t: tuple[Interval, Interval, Interval]
    depth: int = 0


@dataclass(frozen=True)
class CertConfig:
    """Knobs for one certification run.

    epsilon applies in relaxed mode only and may be negative (demanding
    gap >= -epsilon > 0 everywhere, which is refutable).  delta is the
    t-domain margin.  sigma_min and lambda_margin cut out the strict
    interior.  threads=None means one worker per available core.
    """

    mode: str = "relaxed"
    epsilon: float = 1e-9
    delta: float = 1e-3
    sigma_min: float = 0.1
    lambda_margin: float = 0.05
    max_depth: int = 60
    max_boxes: int = 10_000_000
    threads: int | None = None
    use_symmetry: bool = True
    use_mean_value: bool = True
    lambda_split_weight: float = 2.0


@dataclass(frozen=True)
class Witness:
    """What stopped or refuted a run: the offending box, a reason tag
    ("counterexample", "box_budget", "depth_limit", "unsplittable"),
    and for refutations the confirmed bad point."""

    box: Box
    reason: str
    point: SamplePoint | None = None


@dataclass(frozen=True)
class Certificate:
    status: str
    boxes_verified: int
    boxes_split: int
    max_depth_reached: int
    worst_lower_bound: float | None
    witness: Witness | None
    config: CertConfig
    wall_time: float


@dataclass(frozen=True)
class BoxOutcome:
    kind: str  # "verified" | "split" | "candidate" | "outside"
    lower_bound: float | None = None
    point: SamplePoint | None = None
    # Split hint: halving lam cannot improve the blocking factor, so the
    # splitter should spend the cut on a t axis.
    prefer_t: bool = False


def validate_config(cfg: CertConfig) -> None:
    if cfg.mode not in ("relaxed", "strict_interior"):
        raise ValueError(f"unknown mode {cfg.mode!r}")
    if not math.isfinite(cfg.epsilon):
        raise ValueError("epsilon must be finite")
    if not 0.0 < cfg.delta < 0.5:
        raise ValueError("delta must lie in (0, 0.5)")
    if cfg.mode == "strict_interior":
        if not cfg.sigma_min > 0.0:
            raise ValueError("strict mode needs sigma_min > 0")
        if not 0.0 < cfg.lambda_margin < 0.5:
            raise ValueError("strict mode needs lambda_margin in (0, 0.5)")
    if cfg.max_depth < 0:
        raise ValueError("max_depth must be nonnegative")
    if cfg.max_boxes < 1:
        raise ValueError("max_boxes must be positive")
    if cfg.threads is not None and cfg.threads < 1:
        raise ValueError("threads must be positive")
    if not cfg.lambda_split_weight > 0.0:
        raise ValueError("lambda_split_weight must be positive")


def root_box(cfg: CertConfig) -> Box:
    lam = (
        Interval(cfg.lambda_margin, 1.0 - cfg.lambda_margin)
        if cfg.mode == "strict_interior"
        else Interval(0.0, 1.0)
    )
    t_axis = Interval(-1.0 + cfg.delta, 1.0 - cfg.delta)
    return Box(lam, (t_axis, t_axis, t_axis), 0)


def _t_axis_score(iv: Interval) -> float:
    # Relative edge width: near |t| = 1 the enclosures are limited by the
    # spread of 1 - |t|, not the raw width, so an axis hugging the domain
    # edge must be refined first.  Far from the edge this decays to the
    # plain width.
    w = iv.width
    if w <= 0.0:
        return 0.0
    e = 1.0 - max(abs(iv.lo), abs(iv.hi))
    return w / (e + w)


def _lam_axis_score(iv: Interval) -> float:
    # Same idea with the equality manifold at lam = 0 and 1 in the edge
    # role: a box touching it only converges once the lam width shrinks
    # geometrically, so those splits must not starve behind t splits.
    w = iv.width
    if w <= 0.0:
        return 0.0
    # Doubled so an interval centered in [0, 1] scores like a t axis
    # centered in [-1, 1].
    e = 2.0 * min(iv.lo, 1.0 - iv.hi)
    if e < 0.0:
        e = 0.0
    return w / (e + w)


def split_box(
    b: Box, lambda_weight: float = 2.0, prefer_t: bool = False
) -> tuple[Box, Box]:
    """Bisect the axis with the largest score (relative width to the
    nearest hard boundary, lam scaled by lambda_weight); ties go to the
    lowest axis index, lam first.  Falls through to the next-best axis
    when the winner is too thin to bisect; a box degenerate on every
    axis is rejected.  prefer_t demotes lam to a last resort."""
    axes = (b.lam, b.t[0], b.t[1], b.t[2])
    scores = (
        -1.0 if prefer_t else _lam_axis_score(b.lam) * lambda_weight,
        _t_axis_score(b.t[0]),
        _t_axis_score(b.t[1]),
        _t_axis_score(b.t[2]),
    )
    for i in sorted(range(4), key=lambda k: (-scores[k], k)):
        try:
            left, right = split(axes[i])
        except ValueError:
            continue
        parts_l = [b.lam, b.t[0], b.t[1], b.t[2]]
        parts_r = list(parts_l)
        parts_l[i] = left
        parts_r[i] = right
        return (
            Box(parts_l[0], (parts_l[1], parts_l[2], parts_l[3]), b.depth + 1),
            Box(parts_r[0], (parts_r[1], parts_r[2], parts_r[3]), b.depth + 1),
        )
    raise ValueError("box is degenerate on every axis; cannot split")


def symmetry_reduce(b: Box) -> Box | None:
    """Discard boxes that lie strictly on the negative side of the
    odd_sym_sum = 0 surface.

    Sound because gap(lam, -t) = gap(lam, t): for any point x of a
    discarded box, its mirror -x has odd_sym_sum > 0, so no box
    containing -x is ever discarded (an enclosure of a set containing
    -x has positive upper bound), and the mirror is decided by the
    surviving cover.
    """
    sig = odd_sym_sum(*b.t)
    return None if sig.hi < 0.0 else b


# -- enclosure forms ---------------------------------------------------


def _intersect(a: Interval, b: Interval) -> Interval:
    """Intersection of two enclosures of the same quantity.

    Emptiness would mean one input was not an enclosure, and the
    Interval constructor turns that into a loud error.
    """
    return Interval(max(a.lo, b.lo), min(a.hi, b.hi))


def _tanh_ratio(x: Interval, y: Interval) -> Interval:
    """Range of (x - y)/(x + y) over positive intervals x, y.

    The ratio is increasing in x and decreasing in y, so the endpoints
    pin the range, and every value lies strictly inside (-1, 1).  This
    is how z = s/m and u = lam*s/n must be enclosed: the naive interval
    quotient forgets that |s| < m pointwise and escapes (-1, 1) as soon
    as the enclosure of m is wide, which is exactly what happens near
    the edge corners where m comes close to 0.
    """

    def lo_end(a: float, b: float) -> float:
        num = next_down(a - b)
        den = next_up(a + b) if num >= 0.0 else next_down(a + b)
        return next_down(num / den)

    def hi_end(a: float, b: float) -> float:
        num = next_up(a - b)
        den = next_down(a + b) if num >= 0.0 else next_up(a + b)
        return next_up(num / den)

    return Interval(lo_end(x.lo, y.hi), hi_end(x.hi, y.lo))


def _ratio_atanh(x: float) -> Interval:
    """Enclosure of atanh(x)/x at an exact float 0 <= x < 1 (1 at 0).

    Below 1e-2 the direct quotient loses to the 0/0 cancellation, so a
    four-term series with a rigorous geometric tail bound takes over.
    """
    if x == 0.0:
        return Interval(1.0, 1.0)
    xi = Interval(x, x)
    if x < 1e-2:
        sq = square(xi)
        sq2 = square(sq)
        s = 1.0 + sq / 3.0 + sq2 / 5.0 + sq * sq2 / 7.0
        tail = square(sq2) / ((1.0 - sq) * 9.0)
        return Interval(s.lo, (s + tail).hi)
    return atanh_iv(xi) / xi


def _ratio_atanh_iv(y: Interval) -> Interval | None:
    """Enclosure of atanh(y)/y over an interval y inside (-1, 1).

    The ratio is even and increasing in |y|, so the range is pinned by
    the endpoint moduli.  Returns None when y reaches out of (-1, 1).
    """
    hi = max(abs(y.lo), abs(y.hi))
    if hi >= 1.0:
        return None
    lo = 0.0 if y.lo <= 0.0 <= y.hi else min(abs(y.lo), abs(y.hi))
    return Interval(_ratio_atanh(lo).lo, _ratio_atanh(hi).hi)


_ONE_THIRD = Interval(1.0, 1.0) / 3.0


def _difference_quotient_coeff(z: Interval, u: Interval) -> Interval | None:
    """Enclosure of (R(z) - R(u)) / (z^2 - u^2) with R(y) = atanh(y)/y.

    The quotient expands as sum_{k>=1} (sum_{j<k} z^(2j) u^(2(k-1-j)))
    / (2k+1): every term is nonnegative, the k = 1 term is exactly 1/3,
    and the rest total at most M^2 / (2(1 - M^2)) for M = max(|z|, |u|).
    Abstains once M reaches 1.
    """
    mhi = max(abs(z.lo), abs(z.hi), abs(u.lo), abs(u.hi))
    if mhi >= 1.0:
        return None
    msq = square(Interval(mhi, mhi))
    if msq.hi >= 1.0:
        return None
    tail = msq / ((1.0 - msq) * 2.0)
    return Interval(_ONE_THIRD.lo, (_ONE_THIRD + tail).hi)


def _ratio_atanh_quad_coeff(y: Interval) -> Interval | None:
    """Enclosure of (R(y) - 1)/y^2 = sum_{j>=0} y^(2j)/(2j+3).

    Even and increasing in |y|; between 1/3 and 1/3 + M^2/(5(1-M^2))
    for M = max(|y|).  Abstains once M reaches 1.
    """
    mhi = max(abs(y.lo), abs(y.hi))
    if mhi >= 1.0:
        return None
    msq = square(Interval(mhi, mhi))
    if msq.hi >= 1.0:
        return None
    tail = msq / ((1.0 - msq) * 5.0)
    return Interval(_ONE_THIRD.lo, (_ONE_THIRD + tail).hi)


def _atanh_excess_end(v: float, down: bool) -> float:
    """Directed evaluation of atanh(v) - v.  The direct difference
    cancels to nothing near 0, so below |v| = 0.25 it switches to
    v^3 * sum v^(2j)/(2j+3) with a geometric tail bound."""
    vi = Interval(v, v)
    if abs(v) < 0.25:
        sq = square(vi)
        tail = sq / ((1.0 - sq) * 5.0)
        b = Interval(_ONE_THIRD.lo, (_ONE_THIRD + tail).hi)
        out = vi * sq * b
    else:
        out = atanh_iv(vi) - vi
    return out.lo if down else out.hi


def _atanh_excess(x: Interval) -> Interval:
    """atanh(x) - x over x inside (-1, 1): odd and increasing (its
    derivative is x^2/(1-x^2)), so the endpoints pin the range."""
    return Interval(_atanh_excess_end(x.lo, True), _atanh_excess_end(x.hi, False))


def _accepted(bound: float | None, cfg: CertConfig) -> bool:
    if bound is None:
        return False
    if cfg.mode == "strict_interior":
        return bound > 0.0
    return bound >= -cfg.epsilon


def _gap_partials(
    lam: Interval, t1: Interval, t2: Interval, t3: Interval
) -> tuple[Interval, Interval, Interval, Interval] | None:
    """Enclosures of the four partial derivatives of the gap.

    d/dlam = s * (f - ((c-1)/nc - (d-1)/nd) / 2)
    d/dt_i = (1 + t_j t_k) * (lam f - F)
             + s * lam * (1/(1-t_i^2) - (c_i/nc + d_i/nd) / 2)

    c_i and d_i are the partner products over the other two axes, kept
    as explicit products rather than c/(1+t_i) so edge cells hugging
    |t_i| = 1-delta do not pay a wide-by-wide division.
    """
    try:
        c = prod_plus(t1, t2, t3)
        d = prod_minus(t1, t2, t3)
        if c.lo <= 0.0 or d.lo <= 0.0:
            return None
        nc = 1.0 + lam * (c - 1.0)
        nd = 1.0 + lam * (d - 1.0)
        if nc.lo <= 0.0 or nd.lo <= 0.0:
            return None
        sig = _intersect(odd_sym_sum(t1, t2, t3), (c - d) * 0.5)
        f = (ln_iv(c) - ln_iv(d)) * 0.5
        big_f = (ln_iv(nc) - ln_iv(nd)) * 0.5
        lam_f_minus_f = lam * f - big_f
        d_lam = sig * (f - ((c - 1.0) / nc - (d - 1.0) / nd) * 0.5)
        parts = [d_lam]
        for ti, tj, tk in ((t1, t2, t3), (t2, t1, t3), (t3, t1, t2)):
            cpi = (1.0 + tj) * (1.0 + tk)
            dpi = (1.0 - tj) * (1.0 - tk)
            inner = 1.0 / (1.0 - square(ti)) - (cpi / nc + dpi / nd) * 0.5
            parts.append((1.0 + tj * tk) * lam_f_minus_f + sig * (lam * inner))
        return parts[0], parts[1], parts[2], parts[3]
    except (ValueError, ZeroDivisionError):
        return None


def _mean_value_from_parts(
    parts: tuple[Interval, Interval, Interval, Interval],
    lam: Interval,
    t1: Interval,
    t2: Interval,
    t3: Interval,
) -> Interval:
    mids = (lam.mid, t1.mid, t2.mid, t3.mid)
    total = gap_fn(
        Interval(mids[0], mids[0]),
        Interval(mids[1], mids[1]),
        Interval(mids[2], mids[2]),
        Interval(mids[3], mids[3]),
    )
    for part, iv, mi in zip(parts, (lam, t1, t2, t3), mids):
        total = total + part * (iv - mi)
    return total


def mean_value_enclosure(lam: Interval, t1: Interval, t2: Interval, t3: Interval) -> Interval | None:
    """First-order enclosure gap(mid) + sum dgap_i(Box) * (Box_i - mid_i).

    Valid by the mean value theorem along the segment from mid to any
    point of the (convex) box.  Width shrinks quadratically in the box
    width, which is what resolves the tube around t = 0 where gap
    behaves like a quintic of the coordinates.
    """
    parts = _gap_partials(lam, t1, t2, t3)
    if parts is None:
        return None
    return _mean_value_from_parts(parts, lam, t1, t2, t3)


def _form_battery(
    lam: Interval, t1: Interval, t2: Interval, t3: Interval, cfg: CertConfig
) -> tuple[BoxOutcome | None, bool]:
    """Run the closed-form enclosure family over one box.

    Returns an outside or verified outcome (None when no form resolves
    the box at the configured tolerance) plus a prefer-t split hint.
    """
    strict = cfg.mode == "strict_interior"
    # On boxes touching lam = 1 the factored mirror form decides the
    # whole remaining lam range once t is refined, so default the split
    # hint to t there; the W2 section below flips it back for
    # collapsed-m corner cells, where only lam descent converges.
    prefer_t = lam.hi >= 1.0
    c = prod_plus(t1, t2, t3)
    d = prod_minus(t1, t2, t3)
    # Two enclosures of the same quantity intersect to a tighter one:
    # the symmetric-function form wins on thin boxes near t = 0, the
    # (c -+ d)/2 form near the domain edges where c or d collapses.
    sig = _intersect(odd_sym_sum(t1, t2, t3), (c - d) * 0.5)
    if strict and sig.hi < cfg.sigma_min:
        return BoxOutcome("outside"), False

    def accepted(bound: float | None) -> bool:
        return _accepted(bound, cfg)

    m = _intersect(1.0 + elem_sym2(t1, t2, t3), (c + d) * 0.5)
    nc = 1.0 + lam * (c - 1.0)
    nd = 1.0 + lam * (d - 1.0)

    # In strict mode points below sigma_min are outside the claim, so
    # s may be clipped to the region before use as a bound prefactor;
    # the W and V factors still enclose over the whole box.
    if strict:
        sig_r = Interval(max(sig.lo, cfg.sigma_min), max(sig.hi, cfg.sigma_min))
    else:
        sig_r = sig
    ssq = square(sig_r)

    u = _tanh_ratio(nc, nd)
    n = _intersect(1.0 + lam * (m - 1.0), (nc + nd) * 0.5)

    # Excess-drop form.  Pointwise s*(f - s) >= 0 on the whole cube
    # (for s > 0 this is c - d < ln(c) - ln(d), the log-mean of (c, d)
    # staying below 1 because cd <= 1; odd symmetry gives the rest), so
    # in gap = lam*s*(f - s) + lam^2 s^2 kappa / n,
    #   kappa = e2 - lam * s^2 * B(u) / n^2,
    # the first term may be dropped.  Whenever kappa >= 0 the remainder
    # is nonnegative, which settles every box around the f = s surface
    # at any lambda without refinement.  Cheapest test, so it runs
    # first.
    kappa = None
    bu = None
    if n.lo > 0.0:
        bu = _ratio_atanh_quad_coeff(u)
        if bu is not None:
            kappa = (m - 1.0) - (lam * ssq * bu) / square(n)
            if kappa.lo >= 0.0:
                bound = (square(lam) * ssq * (kappa / n)).lo
                if accepted(bound):
                    return BoxOutcome("verified", bound), False

    # Natural log form.
    f_iv = None
    try:
        f = (ln_iv(c) - ln_iv(d)) * 0.5
        f_iv = f
        big_f = (ln_iv(nc) - ln_iv(nd)) * 0.5
        bound = (sig * (lam * f - big_f)).lo
        if accepted(bound):
            return BoxOutcome("verified", bound), False
    except ValueError:
        pass

    z = _tanh_ratio(c, d)
    if m.lo > 0.0:
        z = _intersect(z, sig / m)
    az = _ratio_atanh_iv(z)
    au = _ratio_atanh_iv(u)

    st = t1 + t2 + t3
    e3 = t1 * t2 * t3
    st2 = square(st)
    mix = st * e3 * 2.0 + square(e3)

    # Product form lam * s^2 * W, W = R(z)/m - R(u)/n, then its coupled
    # rewrite W = (1-lam) D / (m n) with
    #   D = st^2 (K - R(u)/3) + R(u) r/2 + mix * K
    #   K = (n + lam*m) C / (m^2 n)
    # built on z^2 - u^2 = s^2 (1-lam)(n + lam*m)/(m n)^2 and
    # e2 = st^2/3 - r/2, which keep D's defect at width^4 in the tube
    # around t = 0 where the direct W loses the e2 cancellation.
    if az is not None and au is not None and m.lo > 0.0 and n.lo > 0.0:
        w = az / m - au / n
        bound = (lam * ssq * w).lo
        if accepted(bound):
            return BoxOutcome("verified", bound), False
        coeff = _difference_quotient_coeff(z, u)
        if coeff is not None:
            k = ((n + lam * m) * coeff) / (square(m) * n)
            r = (square(t1 - t2) + square(t2 - t3) + square(t3 - t1)) / 3.0
            d_val = st2 * (k - au / 3.0) + au * r * 0.5 + mix * k
            w = ((1.0 - lam) * d_val) / (m * n)
            bound = (lam * ssq * w).lo
            if accepted(bound):
                return BoxOutcome("verified", bound), False

    # Lambda-linear form gap = lam * s * V with
    #   V = (f - s) + lam * s * (e2 - lam * s^2 * B(u) / n^2) / n
    # where f - s = sum_i (atanh(t_i) - t_i) - t1 t2 t3 is enclosed as a
    # sum of per-axis excesses instead of a difference of two wide
    # intervals.  This is the only form that stays sharp on the surface
    # f = s at small lam, where the gap falls to second order in lam and
    # the product family needs widths ~ lam * e2 to decide.
    if kappa is not None:
        excess = _atanh_excess(t1) + _atanh_excess(t2) + _atanh_excess(t3) - e3
        # s and f - s share their sign pointwise (same fact the
        # excess-drop form rests on), so on a sign-definite box the
        # enclosure of f - s may be clipped at zero.
        if sig.lo >= 0.0 and excess.lo < 0.0:
            excess = Interval(0.0, max(excess.hi, 0.0))
        elif sig.hi <= 0.0 and excess.hi > 0.0:
            excess = Interval(min(excess.lo, 0.0), 0.0)
        v = excess + (lam * sig_r) * kappa / n
        bound = (lam * sig_r * v).lo
        if accepted(bound):
            return BoxOutcome("verified", bound), False

    # Reflected side: the same pair of forms around lam = 1, built from
    # the reciprocal products 1/c and 1/d (p = c*d, mt = m/p >= 1/2).
    # R is even, so R(zt) = R(-z) reuses az.  The coupled rewrite uses
    # mt - 1 = ((st^2 + q)/2 - e22 + e3^2)/p, whose first two terms
    # carry exact zero ends on boxes touching the diagonal corner.
    # p = prod (1 - t_i^2) is much tighter per axis than the c*d product
    # and keeps p <= 1 without help.
    p = _intersect(
        c * d,
        (1.0 - square(t1)) * (1.0 - square(t2)) * (1.0 - square(t3)),
    )
    mu = 1.0 - lam
    if p.lo > 0.0:
        ct = 1.0 / c
        dt = 1.0 / d
        nct = 1.0 + mu * (ct - 1.0)
        ndt = 1.0 + mu * (dt - 1.0)
        mt = _intersect(m / p, (ct + dt) * 0.5)
        nt = _intersect(1.0 + mu * (mt - 1.0), (nct + ndt) * 0.5)
        ut = _tanh_ratio(nct, ndt)
        aut = _ratio_atanh_iv(ut)
        if aut is not None and nt.lo > 0.0 and az is not None and m.lo > 0.0:
            # Factored mirror identity gap = mu * s^2 * W2 with
            #   W2 = R(ut) / (p nt) - R(z) / m,
            # using s*f = s^2 R(z) / m.  Exact at every lam, and p enters
            # only the nonnegative addend, so W2.lo >= 0 settles the box
            # for its whole lam range at once; near lam = 1 this clears
            # wide t cells the per-term forms cannot.
            w2 = aut / (p * nt) - az / m
            bound = (mu * ssq * w2).lo
            if accepted(bound):
                return BoxOutcome("verified", bound), False
            if (
                prefer_t
                and w2.lo <= -4.0
                and max(t1.width, t2.width, t3.width) <= 0.125
            ):
                # The W2 deficit is z-enclosure width, O(1), except at
                # the collapsed-m corner where it blows up like 1/m and
                # no amount of t refinement reaches 0; only lam descent
                # converges there.  Wide cells look just as hopeless, so
                # only flip once t is refined enough to tell corners
                # apart.
                prefer_t = False
        if aut is not None and nt.lo > 0.0 and f_iv is not None:
            # Mirror linear form gap = mu * (s^2 R(ut) / (p nt) - s f).
            # The first addend is nonnegative outright, so the bound
            # degrades only like mu * (s f), which resolves the sliver
            # hugging lam = 1 even on wide t boxes where lam can no
            # longer split (endpoints are adjacent doubles) and every
            # reciprocal form loses p to blur.
            bound = (mu * (ssq * (aut / (p * nt)) - sig * f_iv)).lo
            if accepted(bound):
                return BoxOutcome("verified", bound), False
        if az is not None and aut is not None and mt.lo > 0.0 and nt.lo > 0.0:
            wt = az / mt - aut / nt
            bound = (-(mu * ssq * wt) / p).lo
            if accepted(bound):
                return BoxOutcome("verified", bound), False
            coeff = _difference_quotient_coeff(z, ut)
            if coeff is not None:
                kp2 = ((nt + mu * mt) * coeff) / (square(mt) * nt) / square(p)
                q = square(t1) + square(t2) + square(t3)
                e22 = square(t1 * t2) + square(t2 * t3) + square(t3 * t1)
                d_val = (
                    st2 * (kp2 - aut / (p * 2.0))
                    - (aut * q) / (p * 2.0)
                    + (aut * (e22 - square(e3))) / p
                    + mix * kp2
                )
                wt = ((1.0 - mu) * d_val) / (mt * nt)
                bound = (-(mu * ssq * wt) / p).lo
                if accepted(bound):
                    return BoxOutcome("verified", bound), False

    return None, prefer_t


def _pin_axes(
    axes: tuple[Interval, Interval, Interval, Interval],
    parts: tuple[Interval, Interval, Interval, Interval],
) -> tuple[Interval, Interval, Interval, Interval] | None:
    """Collapse every axis whose partial derivative keeps one sign onto
    the face where the gap is smallest.  None when nothing pins."""
    out = []
    pinned = False
    for iv, deriv in zip(axes, parts):
        if iv.lo < iv.hi and deriv.lo >= 0.0:
            out.append(Interval(iv.lo, iv.lo))
            pinned = True
        elif iv.lo < iv.hi and deriv.hi <= 0.0:
            out.append(Interval(iv.hi, iv.hi))
            pinned = True
        else:
            out.append(iv)
    if not pinned:
        return None
    return out[0], out[1], out[2], out[3]


def process_box(b: Box, cfg: CertConfig) -> BoxOutcome:
    """Decide one box: Verified with a rigorous lower bound, outside
    the strict region, a candidate counterexample at the midpoint, or
    must-split."""
    lam = b.lam
    t1, t2, t3 = b.t
    strict = cfg.mode == "strict_interior"
    out, prefer_t = _form_battery(lam, t1, t2, t3, cfg)
    if out is not None:
        return out

    parts = _gap_partials(lam, t1, t2, t3)
    if parts is not None:
        if cfg.use_mean_value:
            bound = _mean_value_from_parts(parts, lam, t1, t2, t3).lo
            if _accepted(bound, cfg):
                return BoxOutcome("verified", bound)
        # Monotone face reduction.  An axis whose partial keeps one sign
        # over the box attains the minimum on a face; pinning it there
        # collapses the relative blowup of d and p on cells hugging
        # |t_i| = 1-delta, where every division otherwise spans a wide
        # ratio.  Pins cascade: a face often makes a second axis
        # monotone, so retry a few rounds.
        axes = (lam, t1, t2, t3)
        for _ in range(3):
            pins = _pin_axes(axes, parts)
            if pins is None:
                break
            if strict and pins[1:] != axes[1:]:
                rsig = odd_sym_sum(pins[1], pins[2], pins[3])
                if rsig.lo < cfg.sigma_min:
                    # The pinned face leaves the certified region and the
                    # sigma clip would no longer cover its projections.
                    pins = (pins[0], axes[1], axes[2], axes[3])
                    if pins == axes:
                        break
            plam = pins[0]
            if not strict and plam.lo == plam.hi and plam.lo in (0.0, 1.0):
                # The face lies on the equality manifold and monotonicity
                # makes it the box minimum, which is exactly zero.
                if _accepted(0.0, cfg):
                    return BoxOutcome("verified", 0.0)
            out, _ = _form_battery(pins[0], pins[1], pins[2], pins[3], cfg)
            if out is not None and out.kind == "verified":
                return out
            axes = pins
            parts = _gap_partials(*axes)
            if parts is None:
                break

    # Candidate counterexample check at the midpoint (point arithmetic;
    # the driver confirms or demotes to a split).
    mid_lam, mid_t = lam.mid, (t1.mid, t2.mid, t3.mid)
    point_gap = gap_fn(mid_lam, *mid_t)
    if strict:
        mid_sig = odd_sym_sum(*mid_t)
        if mid_sig >= cfg.sigma_min and point_gap <= 0.0:
            return BoxOutcome(
                "candidate", None, SamplePoint(mid_lam, mid_t, point_gap), prefer_t
            )
    elif point_gap < -cfg.epsilon:
        return BoxOutcome(
            "candidate", None, SamplePoint(mid_lam, mid_t, point_gap), prefer_t
        )
    return BoxOutcome("split", prefer_t=prefer_t)


def _confirm_counterexample(p: SamplePoint, cfg: CertConfig) -> bool:
    ref = float(reference_eval(p.lam, p.t).gap)
    return ref <= 0.0 if cfg.mode == "strict_interior" else ref < -cfg.epsilon


@dataclass
class _PartResult:
    verified: int = 0
    split: int = 0
    discarded: int = 0
    outside: int = 0
    processed: int = 0
    max_depth: int = 0
    worst: float | None = None
    refuted: Witness | None = None
    inconclusive: Witness | None = None


def _run_partition(
    cfg: CertConfig, stack: list[Box], quota: int, collector=None
) -> tuple[_PartResult, list[Box]]:
    """Advance one partition's depth-first search by at most quota boxes.

    The pending stack comes back with the result so the driver can
    resume the partition in a later round; a terminal flag (refuted or
    inconclusive) retires it instead.
    """
    res = _PartResult()
    while stack and res.processed < quota:
        b = stack.pop()
        res.processed += 1
        if b.depth > res.max_depth:
            res.max_depth = b.depth
        if cfg.use_symmetry and cfg.mode == "relaxed" and symmetry_reduce(b) is None:
            res.discarded += 1
            if collector is not None:
                collector("discarded", b, None)
            continue
        out = process_box(b, cfg)
        kind = out.kind
        if kind == "candidate" and not _confirm_counterexample(out.point, cfg):
            kind = "split"
        if kind == "verified":
            res.verified += 1
            if res.worst is None or out.lower_bound < res.worst:
                res.worst = out.lower_bound
            if collector is not None:
                collector("verified", b, out.lower_bound)
        elif kind == "outside":
            res.outside += 1
            if collector is not None:
                collector("outside", b, None)
        elif kind == "candidate":
            res.refuted = Witness(b, "counterexample", out.point)
            break
        else:
            if b.depth >= cfg.max_depth:
                res.inconclusive = Witness(b, "depth_limit")
                break
            try:
                first, second = split_box(b, cfg.lambda_split_weight, out.prefer_t)
            except ValueError:
                res.inconclusive = Witness(b, "unsplittable")
                break
            res.split += 1
            stack.append(second)
            stack.append(first)
    return res, stack


def _partition_job(job: tuple[CertConfig, list[Box], int]) -> tuple[_PartResult, list[Box]]:
    cfg, stack, quota = job
    return _run_partition(cfg, stack, quota)


def _merge(acc: _PartResult, delta: _PartResult) -> None:
    acc.verified += delta.verified
    acc.split += delta.split
    acc.discarded += delta.discarded
    acc.outside += delta.outside
    acc.processed += delta.processed
    acc.max_depth = max(acc.max_depth, delta.max_depth)
    if delta.worst is not None and (acc.worst is None or delta.worst < acc.worst):
        acc.worst = delta.worst
    if acc.refuted is None:
        acc.refuted = delta.refuted
    if acc.inconclusive is None:
        acc.inconclusive = delta.inconclusive


_ROUND_QUOTA = 32_768


def certify(cfg: CertConfig, collector=None) -> Certificate:
    """Run branch-and-bound over the whole configured domain.

    collector, when given, receives (kind, box, bound) for every
    resolved box and forces a single-process run; certificates are
    identical either way.

    Budget flows in rounds: every still-active partition draws a quota
    of min(_ROUND_QUOTA, remaining / active_count) boxes, so partitions
    that finish early release their share to the hard ones.  Quotas
    depend only on deterministic per-partition outcomes, never on
    worker timing.
    """
    validate_config(cfg)
    t0 = time.monotonic()
    levels = min(_PARTITION_LEVELS, cfg.max_depth)
    parts = [root_box(cfg)]
    for _ in range(levels):
        parts = [kid for b in parts for kid in split_box(b, cfg.lambda_split_weight)]
    threads = cfg.threads if cfg.threads is not None else (os.cpu_count() or 1)
    parallel = collector is None and threads > 1 and len(parts) > 1

    stacks: list[list[Box]] = [[part] for part in parts]
    acc = [_PartResult() for _ in parts]
    alive = [True] * len(parts)
    remaining = cfg.max_boxes
    pool = ProcessPoolExecutor(max_workers=min(threads, len(parts))) if parallel else None
    try:
        while remaining > 0 and any(alive):
            active = [i for i in range(len(parts)) if alive[i]]
            quota = max(1, min(remaining // len(active), _ROUND_QUOTA))
            grants: list[tuple[int, int]] = []
            left = remaining
            for i in active:
                if left <= 0:
                    break
                g = min(quota, left)
                grants.append((i, g))
                left -= g
            if pool is not None:
                outs = list(pool.map(_partition_job, [(cfg, stacks[i], g) for i, g in grants]))
            else:
                outs = [_run_partition(cfg, stacks[i], g, collector) for i, g in grants]
            for (i, _), (delta, new_stack) in zip(grants, outs):
                _merge(acc[i], delta)
                stacks[i] = new_stack
                remaining -= delta.processed
                if acc[i].refuted or acc[i].inconclusive or not new_stack:
                    alive[i] = False
    finally:
        if pool is not None:
            pool.shutdown()

    status, witness = "Proved", None
    for res in acc:
        if res.refuted is not None:
            status, witness = "Refuted", res.refuted
            break
    if status == "Proved":
        for res in acc:
            if res.inconclusive is not None:
                status, witness = "Inconclusive", res.inconclusive
                break
    if status == "Proved":
        for i, stack in enumerate(stacks):
            if stack:
                status = "Inconclusive"
                witness = Witness(stack[-1], "box_budget")
                break
    bounds = [res.worst for res in acc if res.worst is not None]
    return Certificate(
        status=status,
        boxes_verified=sum(res.verified for res in acc),
        boxes_split=(len(parts) - 1) + sum(res.split for res in acc),
        max_depth_reached=max((res.max_depth for res in acc), default=0),
        worst_lower_bound=min(bounds) if bounds else None,
        witness=witness,
        config=cfg,
        wall_time=time.monotonic() - t0,
    )
