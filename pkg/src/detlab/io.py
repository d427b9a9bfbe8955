"""CSV and JSON serialization with provenance headers.

Data sections never contain timestamps, worker counts or timings of
verification runs, so identical configurations give identical data.
"""

from __future__ import annotations

import csv
import io
import json
from datetime import datetime, timezone

from . import __version__
from .detcount import DistributionTable
from .reports import Report, exact_json


def provenance(field, d=None, entry_set=None, seed=None) -> dict:
    desc = field.describe()
    out = {"p": desc["p"], "r": desc["r"], "modulus": desc["modulus"]}
    if d is not None:
        out["d"] = d
    if entry_set is not None:
        out["set"] = entry_set.descriptor
        out["seed"] = entry_set.seed if entry_set.seed is not None else seed
    elif seed is not None:
        out["seed"] = seed
    out["version"] = __version__
    return out


def _comment_header(meta: dict) -> str:
    def fmt(v):
        return " ".join(map(str, v)) if isinstance(v, list) else ("" if v is None else str(v))

    return "".join(f"# {k}={fmt(v)}\n" for k, v in meta.items())


def rows_to_csv(meta: dict, header: list[str], rows) -> str:
    buf = io.StringIO()
    buf.write(_comment_header(meta))
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([exact_json(v) for v in row])
    return buf.getvalue()


def table_to_csv(table: DistributionTable, seed=None) -> str:
    meta = provenance(table.field, table.d, table.entry_set, seed)
    return rows_to_csv(meta, ["t", "count"], enumerate(table.counts))


def table_to_json(table: DistributionTable, seed=None) -> dict:
    return {**provenance(table.field, table.d, table.entry_set, seed),
            "members": list(table.entry_set.members),
            "counts": list(table.counts)}


def read_table_csv(text: str) -> tuple[dict, list[int]]:
    """Inverse of :func:`table_to_csv`: (header fields as strings, counts)."""
    meta, counts = {}, []
    lines = text.splitlines()
    body = []
    for line in lines:
        if line.startswith("# "):
            k, _, v = line[2:].partition("=")
            meta[k] = v
        else:
            body.append(line)
    for row in csv.DictReader(body):
        counts.append(int(row["count"]))
    return meta, counts


def report_rows(reports: list[Report]):
    for rep in reports:
        for rec in rep.records:
            yield [rep.kind, rec.check, rec.lhs, rec.rhs, rec.ratio, rec.passed, rec.gating]


REPORT_HEADER = ["kind", "check", "lhs", "rhs", "ratio", "pass", "gating"]


def document(data: dict, workers: int) -> dict:
    """Wrap a data section with run metadata."""
    return {
        "meta": {
            "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "workers": workers,
            "version": __version__,
        },
        "data": exact_json(data),
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"
