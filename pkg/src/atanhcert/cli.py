"""Command-line front end.

Four subcommands: ``certify`` (branch-and-bound certificate),
``scan`` (brute-force gap scan), ``props`` (named property suite), and
``gap-surface`` (2-D slice of the gap as CSV plus a heatmap PNG).

Exit codes follow one contract everywhere: 0 success / proved /
no violations, 1 usage or configuration error, 2 inconclusive,
3 refuted or violations found or properties failed.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict

import numpy as np

from . import __version__, reporting
from .certifier import CertConfig, certify, validate_config
from .oracle import ScanConfig, gap_values, scan_gap
from .props import REGISTRY, run_props

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INCONCLUSIVE = 2
EXIT_VIOLATION = 3

_AXES = ("lambda", "t1", "t2", "t3")


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the exit-code contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _onoff(value: str) -> bool:
    if value not in ("on", "off"):
        raise argparse.ArgumentTypeError(f"expected 'on' or 'off', got {value!r}")
    return value == "on"


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="atanhcert", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    cert = sub.add_parser("certify", help="run the branch-and-bound certifier")
    cert.add_argument("--mode", choices=("relaxed", "strict"), default="relaxed")
    cert.add_argument("--epsilon", type=float, default=1e-9)
    cert.add_argument("--delta", type=float, default=1e-3)
    cert.add_argument("--sigma-min", type=float, default=0.1)
    cert.add_argument("--lambda-margin", type=float, default=0.05)
    cert.add_argument("--max-depth", type=int, default=60)
    cert.add_argument("--max-boxes", type=int, default=10_000_000)
    cert.add_argument("--threads", type=int, default=None)
    cert.add_argument("--symmetry", type=_onoff, default=True, metavar="{on,off}")
    cert.add_argument("--mean-value", type=_onoff, default=True, metavar="{on,off}")
    cert.add_argument("--lambda-split-weight", type=float, default=None)
    cert.add_argument("--out", default=None, metavar="PATH")
    cert.set_defaults(func=cmd_certify)

    scan = sub.add_parser("scan", help="brute-force scan for gap violations")
    which = scan.add_mutually_exclusive_group()
    which.add_argument("--grid", type=int, default=None, metavar="N")
    which.add_argument("--random", type=int, default=None, metavar="N")
    scan.add_argument("--seed", type=int, default=0)
    scan.add_argument("--delta", type=float, default=0.05)
    scan.add_argument("--lambda-min", type=float, default=0.0)
    scan.add_argument("--lambda-max", type=float, default=1.0)
    scan.add_argument("--tolerance", type=float, default=1e-11)
    scan.add_argument("--chebyshev", action="store_true")
    scan.add_argument("--out", default=None, metavar="PATH")
    scan.set_defaults(func=cmd_scan)

    props = sub.add_parser("props", help="run the named property suite")
    props.add_argument("--samples", type=int, default=10_000)
    props.add_argument("--seed", type=int, default=0)
    props.add_argument("--list", action="store_true")
    props.add_argument("--only", default=None, metavar="NAME")
    props.add_argument("--out", default=None, metavar="PATH")
    props.set_defaults(func=cmd_props)

    surf = sub.add_parser("gap-surface", help="sample the gap over a 2-D slice")
    surf.add_argument(
        "--fix",
        action="append",
        default=[],
        metavar="AXIS=VALUE",
        help="pin one axis (lambda, t1, t2, t3); give exactly twice",
    )
    surf.add_argument("--grid", type=int, default=101, metavar="N")
    surf.add_argument("--delta", type=float, default=0.05)
    surf.add_argument("--out", default=None, metavar="PATH.csv")
    surf.add_argument("--no-plot", action="store_true")
    surf.set_defaults(func=cmd_gap_surface)
    return parser


def cmd_certify(args) -> int:
    cfg = CertConfig(
        mode="strict_interior" if args.mode == "strict" else "relaxed",
        epsilon=args.epsilon,
        delta=args.delta,
        sigma_min=args.sigma_min,
        lambda_margin=args.lambda_margin,
        max_depth=args.max_depth,
        max_boxes=args.max_boxes,
        threads=args.threads,
        use_symmetry=args.symmetry,
        use_mean_value=args.mean_value,
        **(
            {"lambda_split_weight": args.lambda_split_weight}
            if args.lambda_split_weight is not None
            else {}
        ),
    )
    try:
        validate_config(cfg)
    except ValueError as exc:
        print(f"atanhcert certify: {exc}", file=sys.stderr)
        return EXIT_USAGE
    started = reporting.utc_now()
    cert = certify(cfg)
    finished = reporting.utc_now()
    manifest = reporting.make_manifest(
        "certify", asdict(cfg), cert.status, started, finished, cert.wall_time
    )
    reporting.write_text(args.out, reporting.dumps_json(reporting.certificate_document(cert, manifest)))
    return {"Proved": EXIT_OK, "Inconclusive": EXIT_INCONCLUSIVE, "Refuted": EXIT_VIOLATION}[
        cert.status
    ]


def cmd_scan(args) -> int:
    try:
        if args.random is not None:
            cfg = ScanConfig(
                mode="random",
                samples=args.random,
                seed=args.seed,
                delta=args.delta,
                lambda_min=args.lambda_min,
                lambda_max=args.lambda_max,
                chebyshev=args.chebyshev,
            )
        else:
            cfg = ScanConfig(
                mode="grid",
                resolution=args.grid if args.grid is not None else 21,
                seed=args.seed,
                delta=args.delta,
                lambda_min=args.lambda_min,
                lambda_max=args.lambda_max,
                chebyshev=args.chebyshev,
            )
    except ValueError as exc:
        print(f"atanhcert scan: {exc}", file=sys.stderr)
        return EXIT_USAGE
    started = reporting.utc_now()
    report = scan_gap(cfg, tolerance=args.tolerance)
    finished = reporting.utc_now()
    outcome = "violations" if report.violations else "ok"
    manifest = reporting.make_manifest(
        "scan",
        {**asdict(cfg), "tolerance": args.tolerance},
        outcome,
        started,
        finished,
        report.wall_time,
    )
    reporting.write_text(args.out, reporting.dumps_json(reporting.scan_document(report, manifest)))
    return EXIT_VIOLATION if report.violations else EXIT_OK


def cmd_props(args) -> int:
    if args.list:
        for name, (summary, _) in REGISTRY.items():
            print(f"{name:24s} {summary}")
        return EXIT_OK
    names = None if args.only is None else [args.only]
    started = reporting.utc_now()
    try:
        results = run_props(names, samples=args.samples, seed=args.seed)
    except KeyError as exc:
        known = ", ".join(REGISTRY)
        print(f"atanhcert props: unknown property {exc.args[0]!r}; known: {known}", file=sys.stderr)
        return EXIT_USAGE
    finished = reporting.utc_now()
    for r in results:
        verdict = "PASS" if r.passed else "FAIL"
        print(f"{verdict} {r.name:24s} worst {r.worst: .6e} (threshold {r.threshold:g}, {r.checked} checks) {r.detail}")
    all_pass = all(r.passed for r in results)
    if args.out is not None:
        manifest = reporting.make_manifest(
            "props",
            {"samples": args.samples, "seed": args.seed, "only": args.only},
            "pass" if all_pass else "fail",
            started,
            finished,
            0.0,
        )
        reporting.write_text(args.out, reporting.dumps_json(reporting.props_document(results, manifest)))
    return EXIT_OK if all_pass else EXIT_VIOLATION


def _parse_fixes(pairs: list[str], delta: float) -> dict[str, float]:
    if len(pairs) != 2:
        raise ValueError(f"exactly two axes must be pinned with --fix, got {len(pairs)}")
    fixes: dict[str, float] = {}
    for item in pairs:
        axis, sep, raw = item.partition("=")
        if not sep or axis not in _AXES:
            raise ValueError(f"bad --fix {item!r}; expected one of {', '.join(_AXES)}=VALUE")
        if axis in fixes:
            raise ValueError(f"axis {axis!r} pinned twice")
        value = float(raw)
        if axis == "lambda" and not 0.0 <= value <= 1.0:
            raise ValueError("lambda must lie in [0, 1]")
        if axis != "lambda" and not abs(value) <= 1.0 - delta:
            raise ValueError(f"{axis} must lie in [-1+delta, 1-delta]")
        fixes[axis] = value
    return fixes


def cmd_gap_surface(args) -> int:
    try:
        if args.grid < 2:
            raise ValueError("grid resolution must be at least 2")
        if not 0.0 < args.delta < 1.0:
            raise ValueError("delta must lie in (0, 1)")
        fixes = _parse_fixes(args.fix, args.delta)
    except ValueError as exc:
        print(f"atanhcert gap-surface: {exc}", file=sys.stderr)
        return EXIT_USAGE
    free = [axis for axis in _AXES if axis not in fixes]
    axis1, axis2 = free

    def axis_values(axis: str) -> np.ndarray:
        if axis == "lambda":
            return np.linspace(0.0, 1.0, args.grid)
        return np.linspace(-1.0 + args.delta, 1.0 - args.delta, args.grid)

    v1 = axis_values(axis1)
    v2 = axis_values(axis2)
    m1, m2 = np.meshgrid(v1, v2, indexing="ij")
    coords = {axis1: m1, axis2: m2}
    for axis, value in fixes.items():
        coords[axis] = np.full_like(m1, value)
    started = reporting.utc_now()
    grid = gap_values(coords["lambda"], coords["t1"], coords["t2"], coords["t3"])
    finished = reporting.utc_now()
    rows = (
        (m1.ravel()[i], m2.ravel()[i], grid.ravel()[i]) for i in range(grid.size)
    )
    reporting.write_text(args.out, reporting.gap_surface_csv(rows))
    if args.out is not None:
        fixed_label = ", ".join(f"{k}={fixes[k]:g}" for k in _AXES if k in fixes)
        manifest = reporting.make_manifest(
            "gap-surface",
            {"fix": dict(fixes), "grid": args.grid, "delta": args.delta, "out": args.out},
            "ok",
            started,
            finished,
            0.0,
        )
        reporting.write_text(
            reporting.sidecar_manifest_path(args.out), reporting.dumps_json(manifest)
        )
        if not args.no_plot:
            from .plots import render_gap_surface

            png = reporting.sidecar_manifest_path(args.out)[: -len(".manifest.json")] + ".png"
            render_gap_surface(v1, v2, grid, axis1, axis2, fixed_label, png)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
