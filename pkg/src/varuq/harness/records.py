"""Prediction records and their CSV / JSONL file formats.

CSV: header ``id,label,member,p0,...,p{K-1}``, one row per (instance, member).
JSONL: one object per instance, ``{"id": str, "label": int, "members": [[...], ...]}``.
JSONL lines holding a ``"meta"`` key are treated as stream headers and skipped.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from ..errors import SchemaError, SimplexError
from ..simplex import AtomMixture, as_simplex_rows

FILE_TOL = 1e-6


@dataclass(frozen=True)
class PredictionRecord:
    id: str
    label: int
    members: np.ndarray  # (M, K), read-only
    split: Optional[str] = field(default=None, compare=False)

    @property
    def K(self) -> int:
        return self.members.shape[1]

    @property
    def M(self) -> int:
        return self.members.shape[0]

    def mixture(self) -> AtomMixture:
        return AtomMixture(self.members)


def make_record(id, label, members, split=None, tol=FILE_TOL, line=None) -> PredictionRecord:
    try:
        m = as_simplex_rows(np.asarray(members, dtype=np.float64), tol=tol)
    except (SimplexError, ValueError) as exc:
        raise SchemaError(str(exc), line) from None
    if m.ndim != 2 or m.shape[0] < 1:
        raise SchemaError(f"record {id!r} needs at least one member vector", line)
    if isinstance(label, bool) or not isinstance(label, (int, np.integer)):
        raise SchemaError(f"label of {id!r} must be an integer, got {label!r}", line)
    if not 0 <= label < m.shape[1]:
        raise SchemaError(f"label {label} of {id!r} outside [0, {m.shape[1]})", line)
    m.setflags(write=False)
    return PredictionRecord(str(id), int(label), m, split)


def _open_text(path):
    if str(path) == "-":
        return sys.stdin
    return open(path, encoding="utf-8", newline="")


def _detect_format(path, fmt):
    if fmt:
        return fmt
    suffix = Path(str(path)).suffix.lower()
    if suffix == ".csv":
        return "csv"
    if suffix in (".jsonl", ".json", ".ndjson"):
        return "jsonl"
    if str(path) == "-":
        return "jsonl"
    raise SchemaError(f"cannot infer format of {path}; pass csv or jsonl")


def _check_uniform_k(records):
    ks = {r.K for r in records}
    if len(ks) > 1:
        raise SchemaError(f"records disagree on the label count: {sorted(ks)}")


def _parse_csv(fh):
    reader = csv.reader(fh)
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError("empty CSV file", 1) from None
    header = [h.strip() for h in header]
    K = len(header) - 3
    expected = ["id", "label", "member"] + [f"p{k}" for k in range(K)]
    if K < 2 or header != expected:
        raise SchemaError(f"header must be id,label,member,p0,...,p{{K-1}} with K >= 2, got {','.join(header)}", 1)
    groups: dict[str, dict] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != K + 3:
            raise SchemaError(f"expected {K + 3} fields, got {len(row)}", lineno)
        rid = row[0]
        try:
            label, member = int(row[1]), int(row[2])
            probs = [float(x) for x in row[3:]]
        except ValueError as exc:
            raise SchemaError(str(exc), lineno) from None
        try:
            as_simplex_rows(probs, tol=FILE_TOL)
        except SimplexError as exc:
            raise SchemaError(str(exc), lineno) from None
        g = groups.setdefault(rid, {"label": label, "members": {}, "line": lineno})
        if g["label"] != label:
            raise SchemaError(f"instance {rid!r} has conflicting labels", lineno)
        if member in g["members"]:
            raise SchemaError(f"duplicate member {member} for instance {rid!r}", lineno)
        g["members"][member] = probs
    records = []
    for rid, g in groups.items():
        members = [g["members"][k] for k in sorted(g["members"])]
        records.append(make_record(rid, g["label"], members, line=g["line"]))
    return records


def _parse_jsonl(fh, meta):
    records, seen = [], set()
    for lineno, line in enumerate(fh, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc.msg}", lineno) from None
        if not isinstance(obj, dict):
            raise SchemaError("each line must be a JSON object", lineno)
        if "meta" in obj:
            meta.append(obj["meta"])
            continue
        for key in ("id", "label", "members"):
            if key not in obj:
                raise SchemaError(f"missing key {key!r}", lineno)
        if not isinstance(obj["id"], str):
            raise SchemaError("id must be a string", lineno)
        if obj["id"] in seen:
            raise SchemaError(f"duplicate id {obj['id']!r}", lineno)
        seen.add(obj["id"])
        members = obj["members"]
        if not isinstance(members, list) or not members or not all(isinstance(m, list) for m in members):
            raise SchemaError("members must be a nonempty list of probability lists", lineno)
        if len({len(m) for m in members}) != 1:
            raise SchemaError("members disagree on the label count", lineno)
        records.append(make_record(obj["id"], obj["label"], members, obj.get("split"), line=lineno))
    return records


def load_predictions(path, fmt: Optional[str] = None, meta: Optional[list] = None) -> list[PredictionRecord]:
    """Read and validate a prediction file (``"-"`` reads JSONL from stdin).

    Stream header objects found in JSONL input are appended to ``meta``.
    """
    fmt = _detect_format(path, fmt)
    meta = [] if meta is None else meta
    fh = _open_text(path)
    try:
        if fmt == "csv":
            records = _parse_csv(fh)
        elif fmt == "jsonl":
            records = _parse_jsonl(fh, meta)
        else:
            raise SchemaError(f"unknown format {fmt!r}")
    finally:
        if fh is not sys.stdin:
            fh.close()
    _check_uniform_k(records)
    return records


def _record_json(r: PredictionRecord) -> str:
    obj = {"id": r.id, "label": r.label, "members": r.members.tolist()}
    if r.split is not None:
        obj["split"] = r.split
    return json.dumps(obj, separators=(",", ":"))


def dumps_jsonl(records, meta=None) -> str:
    lines = []
    if meta is not None:
        lines.append(json.dumps({"meta": meta}, sort_keys=True, separators=(",", ":")))
    lines += [_record_json(r) for r in records]
    return "\n".join(lines) + "\n"


def dumps_csv(records) -> str:
    if not records:
        raise SchemaError("nothing to write")
    K = records[0].K
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", "label", "member"] + [f"p{k}" for k in range(K)])
    for r in records:
        for j, row in enumerate(r.members):
            w.writerow([r.id, r.label, j] + [repr(float(x)) for x in row])
    return buf.getvalue()


def write_predictions(records, path, fmt: Optional[str] = None, meta=None) -> None:
    fmt = _detect_format(path, fmt)
    text = dumps_csv(records) if fmt == "csv" else dumps_jsonl(records, meta)
    if str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")
