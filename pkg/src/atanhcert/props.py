"""Named, runnable property suite.

Every claim the library leans on is registered here as a pure check
with a stable name, so one seeded command can re-run all of them and
report per-property residuals.  Three groups:

  identities     exact algebraic identities of the gap's ingredients,
                 checked pointwise through the scan oracle;
  chord_gap_*    behavior of the log-concavity chord gap hx(lam):
    crossing_*   endpoints, derivative, peak, comparison, and the root
                 structure of the crossing quadratic;
  excess_* /     the odd-sum excess s(t) and the cubic arctanh bound
    atanh_cubic  it rests on.

Each runner draws its own generator seeded from (seed, registry index)
so a single --seed reproduces the entire suite, and reports the worst
margin it saw.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import proofsteps
from .functions import gap
from .oracle import ScanConfig, scan_identity

_COMPARISON_GRID = 1000


@dataclass(frozen=True)
class PropResult:
    """One property's verdict: worst observed margin vs its threshold."""

    name: str
    passed: bool
    checked: int
    worst: float
    threshold: float
    detail: str = ""


def _identity_prop(name: str, kind: str, tolerance: float) -> Callable:
    def run(samples: int, rng: np.random.Generator) -> PropResult:
        cfg = ScanConfig(
            mode="random",
            samples=samples,
            seed=int(rng.integers(2**32)),
            delta=0.01,
        )
        report = scan_identity(kind, cfg, tolerance=tolerance)
        return PropResult(
            name=name,
            passed=not report.violations,
            checked=report.samples_evaluated,
            worst=report.min_gap,
            threshold=tolerance,
            detail="max |residual|",
        )

    return run


def _run_sign_flip(samples: int, rng: np.random.Generator) -> PropResult:
    lam = rng.uniform(0.0, 1.0, samples)
    t = rng.uniform(-0.99, 0.99, (3, samples))
    worst = 0.0
    for i in range(samples):
        a = gap(lam[i], t[0, i], t[1, i], t[2, i])
        b = gap(lam[i], -t[0, i], -t[1, i], -t[2, i])
        worst = max(worst, abs(a - b))
    return PropResult("sign_flip", worst <= 1e-12, samples, worst, 1e-12, "max |gap(t) - gap(-t)|")


def _run_endpoint_zero(samples: int, rng: np.random.Generator) -> PropResult:
    t = rng.uniform(-0.99, 0.99, (3, samples))
    worst = 0.0
    for i in range(samples):
        worst = max(
            worst,
            abs(gap(0.0, t[0, i], t[1, i], t[2, i])),
            abs(gap(1.0, t[0, i], t[1, i], t[2, i])),
        )
    return PropResult(
        "endpoint_zero", worst <= 1e-12, 2 * samples, worst, 1e-12, "max |gap| at lam in {0, 1}"
    )


def _chord_x(rng: np.random.Generator, n: int) -> np.ndarray:
    # Log-uniform over [1e-3, 1e3], the range the (1 +- t) products span
    # comfortably; x = 1 gives the identically-zero chord gap.
    return np.exp(rng.uniform(math.log(1e-3), math.log(1e3), n))


def _run_chord_endpoints(samples: int, rng: np.random.Generator) -> PropResult:
    xs = _chord_x(rng, samples)
    worst = 0.0
    for x in xs:
        worst = max(
            worst,
            abs(proofsteps.log_concavity_gap(x, 0.0)),
            abs(proofsteps.log_concavity_gap(x, 1.0)),
        )
    return PropResult(
        "chord_gap_endpoints", worst <= 1e-14, 2 * samples, worst, 1e-14, "max |hx(0)|, |hx(1)|"
    )


def _run_chord_derivative(samples: int, rng: np.random.Generator) -> PropResult:
    step = 1e-6
    xs = _chord_x(rng, samples)
    lams = rng.uniform(step, 1.0 - step, samples)
    em = xs - 1.0
    exact = em / (1.0 + lams * em) - np.log(xs)
    central = (
        np.log1p((lams + step) * em) - np.log1p((lams - step) * em)
    ) / (2.0 * step) - np.log(xs)
    worst = float(np.max(np.abs(exact - central) / np.maximum(1.0, np.abs(exact))))
    return PropResult(
        "chord_gap_derivative", worst <= 1e-6, samples, worst, 1e-6, "central difference, h=1e-6"
    )


def _run_chord_peak(samples: int, rng: np.random.Generator) -> PropResult:
    xs = _chord_x(rng, samples)
    worst = 0.0
    ok = True
    for x in xs:
        peak = proofsteps.log_concavity_gap_peak(x)
        ok = ok and 0.0 < peak < 1.0
        worst = max(worst, abs(proofsteps.log_concavity_gap_dlam(x, peak)))
    return PropResult(
        "chord_gap_peak", ok and worst <= 1e-12, samples, worst, 1e-12, "max |h'(peak)|, peak in (0,1)"
    )


def _admissible_pairs(samples: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """(c, d) with 0 < c - d < ln(c/d), by rejection."""
    cs = np.empty(samples)
    ds = np.empty(samples)
    have = 0
    while have < samples:
        n = max(1024, samples - have)
        d = np.exp(rng.uniform(math.log(1e-3), 0.0, n))
        c = d + rng.uniform(0.0, 1.0, n) * (1.0 - d)
        keep = (c - d > 1e-9) & (c - d < np.log(c) - np.log(d))
        k = min(int(keep.sum()), samples - have)
        cs[have : have + k] = c[keep][:k]
        ds[have : have + k] = d[keep][:k]
        have += k
    return cs, ds


def _run_chord_comparison(samples: int, rng: np.random.Generator) -> PropResult:
    lam_grid = np.linspace(0.0, 1.0, _COMPARISON_GRID)
    cs, ds = _admissible_pairs(samples, rng)
    worst = -math.inf
    chunk = max(1, 500_000 // _COMPARISON_GRID)
    for i in range(0, samples, chunk):
        c = cs[i : i + chunk, None]
        d = ds[i : i + chunk, None]
        hc = np.log1p(lam_grid * (c - 1.0)) - lam_grid * np.log(c)
        hd = np.log1p(lam_grid * (d - 1.0)) - lam_grid * np.log(d)
        worst = max(worst, float(np.max(hc - hd)))
    return PropResult(
        "chord_gap_comparison",
        worst <= 1e-12,
        samples * _COMPARISON_GRID,
        worst,
        1e-12,
        "max hc - hd on admissible (c, d)",
    )


def _run_crossing_cases(samples: int, rng: np.random.Generator) -> PropResult:
    """Root and vertex structure of the crossing quadratic, case by
    case.  Under the comparison premise 0 < c - d < ln(c/d) the
    constant coefficient is positive, so c > 1 > d forces two real
    roots astride zero (hence at most one in [0, 1]); c and d on the
    same side of 1 push the vertex outside [0, 1] by algebra alone,
    premise or not.  Whenever two roots exist they must bracket the
    vertex and multiply to C/A."""
    bad = 0
    checked = 0
    per = samples // 3

    def check_universal(qa) -> bool:
        if len(qa.roots) == 2 and qa.vertex is not None:
            r1, r2 = qa.roots
            prod = qa.C / qa.A
            if not (r1 <= qa.vertex <= r2):
                return False
            if abs(r1 * r2 - prod) > 1e-9 * max(1.0, abs(prod)):
                return False
        return True

    # c > 1 > d under the premise, by rejection.
    done = 0
    while done < per:
        c = 1.0 + rng.uniform(0.0, 2.0)
        d = rng.uniform(0.05, 1.0)
        try:
            if not proofsteps.logmean_below_one(c, d):
                continue
            qa = proofsteps.crossing_quadratic(c, d)
        except proofsteps.DegenerateCaseError:
            continue
        done += 1
        checked += 1
        in_unit = sum(1 for r in qa.roots if 0.0 <= r <= 1.0)
        if (
            len(qa.roots) != 2
            or not qa.roots[0] * qa.roots[1] < 0.0
            or in_unit > 1
            or not check_universal(qa)
        ):
            bad += 1

    # Same side of 1: vertex sign is unconditional.
    for case in ("above", "below"):
        for _ in range(per):
            if case == "above":
                c, d = 1.0 + rng.uniform(1e-6, 7.0, 2)
            else:
                c, d = np.exp(rng.uniform(math.log(1e-3), -1e-9, 2))
            try:
                qa = proofsteps.crossing_quadratic(float(c), float(d))
            except proofsteps.DegenerateCaseError:
                continue
            checked += 1
            if qa.vertex is None or not check_universal(qa):
                bad += 1
            elif case == "above" and not qa.vertex < 0.0:
                bad += 1
            elif case == "below" and not qa.vertex > 1.0:
                bad += 1
    return PropResult(
        "crossing_cases", bad == 0, checked, float(bad), 0.0, "case-analysis exceptions"
    )


def _positive_sigma_points(samples: int, rng: np.random.Generator) -> np.ndarray:
    """(3, samples) array of t with odd_sym_sum > 0, mixing the proof's
    cases: generic draws (mirrored into the positive half), same-sign
    t1*t2 where the excess has interior stationary points, opposite
    signs where it is monotone, and points just above the sigma = 0
    root in t3."""
    quarter = samples // 4
    out = np.empty((3, samples))
    # Generic, mirrored so sigma > 0.
    t = rng.uniform(-0.99, 0.99, (3, quarter))
    s = t[0] + t[1] + t[2] + t[0] * t[1] * t[2]
    t[:, s < 0] *= -1.0
    out[:, :quarter] = t
    # Same-sign pair.
    t1 = rng.uniform(0.01, 0.99, quarter) * np.where(rng.random(quarter) < 0.5, 1.0, -1.0)
    t2 = np.abs(rng.uniform(0.01, 0.99, quarter)) * np.sign(t1)
    t3 = rng.uniform(-0.99, 0.99, quarter)
    block = np.stack([t1, t2, t3])
    s = block[0] + block[1] + block[2] + block[0] * block[1] * block[2]
    block[:, s < 0] *= -1.0
    out[:, quarter : 2 * quarter] = block
    # Opposite-sign pair.
    t1 = rng.uniform(0.01, 0.99, quarter)
    t2 = -rng.uniform(0.01, 0.99, quarter)
    t3 = rng.uniform(-0.99, 0.99, quarter)
    block = np.stack([t1, t2, t3])
    s = block[0] + block[1] + block[2] + block[0] * block[1] * block[2]
    block[:, s < 0] *= -1.0
    out[:, 2 * quarter : 3 * quarter] = block
    # Just above the t3 root of sigma = 0.
    rest = samples - 3 * quarter
    t1 = rng.uniform(-0.9, 0.9, rest)
    t2 = rng.uniform(-0.9, 0.9, rest)
    root = -(t1 + t2) / (1.0 + t1 * t2)
    frac = rng.uniform(1e-3, 1.0, rest)
    t3 = root + frac * (0.99 - root)
    out[:, 3 * quarter :] = np.stack([t1, t2, t3])
    return out


def _run_excess_negative(samples: int, rng: np.random.Generator) -> PropResult:
    t = _positive_sigma_points(samples, rng)
    s = t[0] + t[1] + t[2] + t[0] * t[1] * t[2]
    excess = s - (np.arctanh(t[0]) + np.arctanh(t[1]) + np.arctanh(t[2]))
    keep = s > 0
    worst = float(np.max(excess[keep]))
    return PropResult(
        "excess_negative",
        worst < 0.0,
        int(keep.sum()),
        worst,
        0.0,
        "max s(t) over sigma > 0 (must stay < 0)",
    )


def _run_excess_zero_at_root(samples: int, rng: np.random.Generator) -> PropResult:
    worst = 0.0
    for _ in range(samples):
        t1 = rng.uniform(-0.95, 0.95)
        t2 = rng.uniform(-0.95, 0.95)
        t3 = proofsteps.sym_zero_t3(t1, t2)
        worst = max(worst, abs(proofsteps.odd_sum_excess(t1, t2, t3)))
    return PropResult(
        "excess_zero_at_root", worst <= 1e-12, samples, worst, 1e-12, "max |s| at the sigma = 0 root"
    )


def _run_excess_stationary_real(samples: int, rng: np.random.Generator) -> PropResult:
    bad = 0
    for _ in range(samples):
        t1 = rng.uniform(-0.99, 0.99)
        t2 = rng.uniform(-0.99, 0.99)
        pts = proofsteps.excess_stationary_t3(t1, t2)
        if (len(pts) == 2) != (t1 * t2 >= 0.0):
            bad += 1
        if pts and abs(proofsteps.odd_sum_excess_dt3(t1, t2, pts[1])) > 1e-9:
            bad += 1
    return PropResult(
        "excess_stationary_real",
        bad == 0,
        samples,
        float(bad),
        0.0,
        "stationary t3 real iff t1*t2 >= 0",
    )


def _run_atanh_cubic(samples: int, rng: np.random.Generator) -> PropResult:
    ts = np.concatenate(
        [
            np.exp(rng.uniform(math.log(1e-3), math.log(1.0 - 1e-3), samples - 2)),
            [1e-3, 1.0 - 1e-3],
        ]
    )
    bad = sum(0 if proofsteps.atanh_cubic_lower_bound(float(t)) else 1 for t in ts)
    return PropResult(
        "atanh_cubic", bad == 0, len(ts), float(bad), 0.0, "atanh(t) > t + t^3/3 failures"
    )


REGISTRY: dict[str, tuple[str, Callable[[int, np.random.Generator], PropResult]]] = {
    "sign_average": (
        "sign-averaged weighted sum equals the self-weighted arctanh sum",
        _identity_prop("sign_average", "sign_average", 1e-12),
    ),
    "product_facts": (
        "sum and difference of the (1 +- t) products hit 2(1+e2) and 2*sigma",
        _identity_prop("product_facts", "product_facts", 1e-13),
    ),
    "log_forms": (
        "log-ratio forms agree with the arctanh forms of f and F",
        _identity_prop("log_forms", "log_forms", 1e-12),
    ),
    "sign_flip": ("gap is even under t -> -t", _run_sign_flip),
    "endpoint_zero": ("gap vanishes at lam = 0 and lam = 1", _run_endpoint_zero),
    "chord_gap_endpoints": ("hx(0) = hx(1) = 0", _run_chord_endpoints),
    "chord_gap_derivative": ("h' matches central differences", _run_chord_derivative),
    "chord_gap_peak": ("the closed-form peak zeroes h' inside (0,1)", _run_chord_peak),
    "chord_gap_comparison": (
        "hc <= hd on [0,1] whenever 0 < c - d < ln(c/d)",
        _run_chord_comparison,
    ),
    "crossing_cases": (
        "crossing-quadratic roots and vertex fall where the case analysis says",
        _run_crossing_cases,
    ),
    "excess_negative": ("s(t) < 0 whenever the odd symmetric sum is positive", _run_excess_negative),
    "excess_zero_at_root": ("s vanishes where the odd symmetric sum does", _run_excess_zero_at_root),
    "excess_stationary_real": (
        "excess stationary points are real exactly when t1*t2 >= 0",
        _run_excess_stationary_real,
    ),
    "atanh_cubic": ("atanh(t) > t + t^3/3 on (0, 1)", _run_atanh_cubic),
}


def run_props(names: list[str] | None = None, samples: int = 10_000, seed: int = 0) -> list[PropResult]:
    """Run the selected properties (all by default) and return their
    results in registry order.  Unknown names raise KeyError."""
    chosen = list(REGISTRY) if names is None else names
    for name in chosen:
        if name not in REGISTRY:
            raise KeyError(name)
    results = []
    for name in chosen:
        index = list(REGISTRY).index(name)
        rng = np.random.default_rng([seed, index])
        raw = REGISTRY[name][1](samples, rng)
        # runners may leak numpy scalars; reports must serialize as JSON
        results.append(
            dataclasses.replace(
                raw, passed=bool(raw.passed), checked=int(raw.checked), worst=float(raw.worst)
            )
        )
    return results
