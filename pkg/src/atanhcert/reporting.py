"""Serialization of run artifacts.

Every emitted document carries a manifest: the exact command, a full
echo of the configuration, the tool version, RFC 3339 UTC timestamps,
and the outcome, so any report can be reproduced from itself.  JSON
documents are schema-versioned and use lower_snake_case keys; floats
serialize through repr, the shortest round-trip form.  The CSV emitter
writes RFC 4180 rows with LF line endings; since a comment row would
break the shape contract, its manifest goes to a sidecar file at
``<stem>.manifest.json``.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from dataclasses import asdict
from datetime import datetime, timezone
from typing import Any, Iterable, Mapping

from . import __version__
from .certifier import Certificate
from .oracle import SamplePoint, ScanReport

SCHEMA_VERSION = 1

# Manifest keys that vary between reruns of the same configuration;
# determinism comparisons drop exactly these.
VOLATILE_MANIFEST_KEYS = frozenset({"started_at", "finished_at", "wall_time_seconds"})


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="microseconds")


def make_manifest(
    command: str,
    config: Mapping[str, Any],
    outcome: str,
    started_at: str,
    finished_at: str,
    wall_time: float,
) -> dict[str, Any]:
    return {
        "command": command,
        "config": dict(config),
        "tool_version": __version__,
        "started_at": started_at,
        "finished_at": finished_at,
        "wall_time_seconds": wall_time,
        "outcome": outcome,
    }


def _point_doc(p: SamplePoint) -> dict[str, Any]:
    return {"lambda": p.lam, "t": list(p.t), "value": p.value}


def certificate_document(cert: Certificate, manifest: Mapping[str, Any]) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "status": cert.status,
        "worst_lower_bound": cert.worst_lower_bound,
        "boxes_verified": cert.boxes_verified,
        "boxes_split": cert.boxes_split,
        "max_depth_reached": cert.max_depth_reached,
    }
    if cert.witness is not None:
        box = cert.witness.box
        doc["witness"] = {
            "reason": cert.witness.reason,
            "box": {
                "lambda": [box.lam.lo, box.lam.hi],
                "t": [[iv.lo, iv.hi] for iv in box.t],
                "depth": box.depth,
            },
        }
        if cert.witness.point is not None:
            doc["witness"]["point"] = _point_doc(cert.witness.point)
    doc["config"] = asdict(cert.config)
    doc["manifest"] = dict(manifest)
    return doc


def scan_document(report: ScanReport, manifest: Mapping[str, Any]) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": report.kind,
        "min_gap": report.min_gap,
        "argmin": {"lambda": report.argmin.lam, "t": list(report.argmin.t)},
        "samples_evaluated": report.samples_evaluated,
        "tolerance": report.tolerance,
        "violations": [_point_doc(v) for v in report.violations],
        "manifest": dict(manifest),
    }


def props_document(results: Iterable, manifest: Mapping[str, Any]) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "properties": [asdict(r) for r in results],
        "manifest": dict(manifest),
    }


def dumps_json(doc: Mapping[str, Any]) -> str:
    return json.dumps(doc, indent=2, allow_nan=True) + "\n"


def comparable_json(text: str) -> str:
    """Reserialize a report with the volatile manifest entries removed,
    for bit-identity comparisons between reruns."""
    doc = json.loads(text)
    manifest = doc.get("manifest")
    if isinstance(manifest, dict):
        for key in VOLATILE_MANIFEST_KEYS:
            manifest.pop(key, None)
    return json.dumps(doc, indent=2, sort_keys=True)


def write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def gap_surface_csv(rows: Iterable[tuple[float, float, float]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["axis1", "axis2", "gap"])
    for a1, a2, g in rows:
        writer.writerow([repr(float(a1)), repr(float(a2)), repr(float(g))])
    return buf.getvalue()


def sidecar_manifest_path(csv_path: str) -> str:
    stem = csv_path[:-4] if csv_path.endswith(".csv") else csv_path
    return stem + ".manifest.json"
