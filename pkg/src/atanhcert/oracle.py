"""Sampling oracle: high-precision reference values and bulk scans.

The oracle is the non-rigorous half of the dual-route check.  It never
proves anything; it hunts for counterexamples and supplies reference
values at far more precision than the working binary64 path, so the two
routes can be compared without sharing failure modes.

``reference_eval`` runs on mpmath at 60 significant digits (absolute
error below 1e-25 everywhere on \|t_i\| <= 0.99, checked by test against
a 120-digit recomputation).  The scans evaluate the binary64 point
formulas vectorized over numpy arrays, in fixed-size chunks so reports
are byte-stable regardless of problem size.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np

_CHUNK = 1 << 20


@dataclass(frozen=True)
class ReferenceValues:
    """Every derived quantity at one (lam, t), as mpmath floats."""

    lam: object
    t: tuple
    odd_sym_sum: object
    elem_sym2: object
    prod_plus: object
    prod_minus: object
    atanh_sum: object
    weighted_atanh_sum: object
    pooled_atanh: object
    pooled_weighted: object
    gap: object


def reference_eval(lam, t, dps: int = 60) -> ReferenceValues:
    """Evaluate all quantities at (lam, t) in dps-digit arithmetic.

    Independent of the binary64 implementations: everything is computed
    from scratch with mpmath primitives.
    """
    with mp.workdps(dps):
        lam_m = mp.mpf(lam)
        tm = tuple(mp.mpf(x) for x in t)
        t1, t2, t3 = tm
        s = t1 + t2 + t3 + t1 * t2 * t3
        e2 = t1 * t2 + t2 * t3 + t3 * t1
        c = (1 + t1) * (1 + t2) * (1 + t3)
        d = (1 - t1) * (1 - t2) * (1 - t3)
        f = mp.atanh(t1) + mp.atanh(t2) + mp.atanh(t3)
        big_f = (mp.log((1 - lam_m) + lam_m * c) - mp.log((1 - lam_m) + lam_m * d)) / 2
        return ReferenceValues(
            lam=lam_m,
            t=tm,
            odd_sym_sum=s,
            elem_sym2=e2,
            prod_plus=c,
            prod_minus=d,
            atanh_sum=f,
            weighted_atanh_sum=s * f,
            pooled_atanh=big_f,
            pooled_weighted=s * big_f,
            gap=s * (lam_m * f - big_f),
        )


@dataclass(frozen=True)
class ScanConfig:
    """Shared knobs for grid and random scans.

    mode is "grid" or "random".  Grid mode places ``resolution`` points
    per axis; random mode draws ``samples`` points from a seeded PCG64
    stream, so repeated runs are bit-identical.  ``delta`` keeps t away
    from the arctanh poles: t in [-1+delta, 1-delta].  ``chebyshev``
    switches grid spacing to Chebyshev nodes, clustering samples toward
    the domain edges where the functions steepen.
    """

    mode: str = "grid"
    resolution: int = 21
    samples: int = 100_000
    seed: int = 0
    delta: float = 0.05
    lambda_min: float = 0.0
    lambda_max: float = 1.0
    chebyshev: bool = False

    def __post_init__(self):
        if self.mode not in ("grid", "random"):
            raise ValueError(f"unknown scan mode {self.mode!r}")
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must lie in (0, 1)")
        if not 0.0 <= self.lambda_min <= self.lambda_max <= 1.0:
            raise ValueError("need 0 <= lambda_min <= lambda_max <= 1")
        if self.mode == "grid" and self.resolution < 2:
            raise ValueError("grid resolution must be at least 2")
        if self.mode == "random" and self.samples < 1:
            raise ValueError("need at least one random sample")


@dataclass(frozen=True)
class SamplePoint:
    lam: float
    t: tuple[float, float, float]
    value: float


@dataclass
class ScanReport:
    """Outcome of one scan.

    For gap scans ``min_gap`` is the smallest gap seen and ``argmin``
    its location.  Identity scans reuse the same slots with flipped
    sense: ``min_gap`` holds the largest residual and ``argmin`` the
    point attaining it.
    """

    kind: str
    min_gap: float
    argmin: SamplePoint
    samples_evaluated: int
    violations: list[SamplePoint] = field(default_factory=list)
    tolerance: float = 0.0
    wall_time: float = 0.0


def _axis(cfg: ScanConfig, lo: float, hi: float, n: int) -> np.ndarray:
    if cfg.chebyshev:
        k = np.arange(n, dtype=np.float64)
        nodes = -np.cos(np.pi * k / (n - 1))  # ascending in [-1, 1]
        return 0.5 * (lo + hi) + 0.5 * (hi - lo) * nodes
    return np.linspace(lo, hi, n)


def gap_values(lam, t1, t2, t3):
    """Vectorized binary64 gap, same formulas as the scalar point path."""
    lam = np.asarray(lam, dtype=np.float64)
    t1 = np.asarray(t1, dtype=np.float64)
    t2 = np.asarray(t2, dtype=np.float64)
    t3 = np.asarray(t3, dtype=np.float64)
    s = t1 + t2 + t3 + t1 * t2 * t3
    c = (1 + t1) * (1 + t2) * (1 + t3)
    d = (1 - t1) * (1 - t2) * (1 - t3)
    f = np.arctanh(t1) + np.arctanh(t2) + np.arctanh(t3)
    big_f = 0.5 * (np.log((1 - lam) + lam * c) - np.log((1 - lam) + lam * d))
    return s * (lam * f - big_f)


def _identity_residuals(kind: str, lam, t1, t2, t3):
    if kind == "sign_average":
        lhs = t1 * np.arctanh(t1) + t2 * np.arctanh(t2) + t3 * np.arctanh(t3)

        def wsum(a, b, c):
            s = a + b + c + a * b * c
            return s * (np.arctanh(a) + np.arctanh(b) + np.arctanh(c))

        rhs = 0.25 * (
            wsum(t1, t2, t3) + wsum(t1, -t2, t3) + wsum(t1, t2, -t3) + wsum(t1, -t2, -t3)
        )
        return np.abs(lhs - rhs)
    if kind == "product_facts":
        s = t1 + t2 + t3 + t1 * t2 * t3
        e2 = t1 * t2 + t2 * t3 + t3 * t1
        c = (1 + t1) * (1 + t2) * (1 + t3)
        d = (1 - t1) * (1 - t2) * (1 - t3)
        # Residuals relative to the magnitudes entering each identity,
        # max(|c|, |d|, 1): near the zero surface of c - d both sides are
        # pure cancellation noise and a ratio to the tiny true value
        # would measure nothing but roundoff.
        scale = np.maximum(np.maximum(np.abs(c), np.abs(d)), 1.0)
        r_sum = np.abs((c + d) - 2 * (1 + e2)) / scale
        r_diff = np.abs((c - d) - 2 * s) / scale
        return np.maximum(r_sum, r_diff)
    if kind == "log_forms":
        s = t1 + t2 + t3 + t1 * t2 * t3
        e2 = t1 * t2 + t2 * t3 + t3 * t1
        c = (1 + t1) * (1 + t2) * (1 + t3)
        d = (1 - t1) * (1 - t2) * (1 - t3)
        f_sum = np.arctanh(t1) + np.arctanh(t2) + np.arctanh(t3)
        f_log = 0.5 * (np.log(c) - np.log(d))
        big_f_log = 0.5 * (np.log((1 - lam) + lam * c) - np.log((1 - lam) + lam * d))
        big_f_direct = np.arctanh(lam * s / (1 + lam * e2))
        return np.maximum(np.abs(f_log - f_sum), np.abs(big_f_log - big_f_direct))
    raise ValueError(f"unknown identity {kind!r}")


def _chunks_grid(cfg: ScanConfig, with_lambda: bool):
    """Yield (lam, t1, t2, t3) flat arrays in lexicographic point order."""
    n = cfg.resolution
    t_axis = _axis(cfg, -1.0 + cfg.delta, 1.0 - cfg.delta, n)
    lam_axis = _axis(cfg, cfg.lambda_min, cfg.lambda_max, n) if with_lambda else np.array([0.0])
    inner2, inner3 = np.meshgrid(t_axis, t_axis, indexing="ij")
    inner2 = inner2.ravel()
    inner3 = inner3.ravel()
    for lam in lam_axis:
        for v1 in t_axis:
            yield (
                np.full(inner2.shape, lam),
                np.full(inner2.shape, v1),
                inner2,
                inner3,
            )


def _chunks_random(cfg: ScanConfig, with_lambda: bool):
    rng = np.random.default_rng(cfg.seed)
    lo, hi = -1.0 + cfg.delta, 1.0 - cfg.delta
    remaining = cfg.samples
    while remaining > 0:
        m = min(remaining, _CHUNK)
        lam = rng.uniform(cfg.lambda_min, cfg.lambda_max, m) if with_lambda else np.zeros(m)
        t1 = rng.uniform(lo, hi, m)
        t2 = rng.uniform(lo, hi, m)
        t3 = rng.uniform(lo, hi, m)
        yield lam, t1, t2, t3
        remaining -= m


def _run_scan(kind: str, cfg: ScanConfig, tolerance: float, values_fn, sense: str) -> ScanReport:
    """Shared scan driver.  sense "min" tracks the smallest value,
    "max" the largest; ties break lexicographically on (lam, t)."""
    t0 = time.monotonic()
    with_lambda = kind in ("gap", "log_forms")
    chunks = _chunks_grid(cfg, with_lambda) if cfg.mode == "grid" else _chunks_random(cfg, with_lambda)
    best: SamplePoint | None = None
    violations: list[SamplePoint] = []
    total = 0
    for lam, t1, t2, t3 in chunks:
        vals = values_fn(lam, t1, t2, t3)
        total += vals.size
        idx = int(np.argmin(vals) if sense == "min" else np.argmax(vals))
        cand = SamplePoint(
            lam=float(lam[idx]),
            t=(float(t1[idx]), float(t2[idx]), float(t3[idx])),
            value=float(vals[idx]),
        )
        if best is None or _beats(cand, best, sense):
            best = cand
        bad = np.nonzero(vals < -tolerance if sense == "min" else vals > tolerance)[0]
        for i in bad:
            violations.append(
                SamplePoint(
                    lam=float(lam[i]),
                    t=(float(t1[i]), float(t2[i]), float(t3[i])),
                    value=float(vals[i]),
                )
            )
    assert best is not None
    return ScanReport(
        kind=kind,
        min_gap=best.value,
        argmin=best,
        samples_evaluated=total,
        violations=violations,
        tolerance=tolerance,
        wall_time=time.monotonic() - t0,
    )


def _beats(cand: SamplePoint, best: SamplePoint, sense: str) -> bool:
    if cand.value != best.value:
        return cand.value < best.value if sense == "min" else cand.value > best.value
    return (cand.lam, cand.t) < (best.lam, best.t)


def scan_gap(cfg: ScanConfig, tolerance: float = 1e-11) -> ScanReport:
    """Hunt for gap values below -tolerance over the margin domain."""
    return _run_scan("gap", cfg, tolerance, gap_values, "min")


def scan_identity(kind: str, cfg: ScanConfig, tolerance: float = 1e-12) -> ScanReport:
    """Check an exact identity pointwise; report the worst residual.

    kind is one of "sign_average" (sign-averaged weighted sum equals the
    self-weighted arctanh sum), "product_facts" (sum and difference of
    the (1 +- t) products), or "log_forms" (log-ratio forms agree with
    the direct arctanh forms).
    """
    return _run_scan(kind, cfg, tolerance, lambda *a: _identity_residuals(kind, *a), "max")


def manifold_distance(lam: float, t: tuple[float, float, float]) -> float:
    """Distance-like proximity to the known equality set: min of lam,
    1-lam, and |odd_sym_sum(t)|."""
    s = t[0] + t[1] + t[2] + t[0] * t[1] * t[2]
    return min(lam, 1.0 - lam, abs(s))
