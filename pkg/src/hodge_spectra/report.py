"""Deterministic JSON / CSV serialization of results.

Floats are rounded to 15 significant digits, keys keep insertion order and no
timestamps are written, so identical inputs give byte-identical output.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math

import numpy as np

SIG_DIGITS = 15
RECORD_COLUMNS = ["eigenvalue", "multiplicity", "k", "degree", "tag"]
DETERMINISM_NOTE = "no timestamps; floats rounded to 15 significant digits; fixed key order"


def round_float(x: float):
    x = float(x)
    if not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return float(f"{x:.{SIG_DIGITS}g}")


def normalize(obj):
    """Convert to plain JSON types with rounded floats."""
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return round_float(obj)
    if isinstance(obj, dict):
        return {str(normalize(k)): normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [normalize(v) for v in obj]
    if hasattr(obj, "as_dict"):
        return normalize(obj.as_dict())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_json(doc) -> str:
    return json.dumps(normalize(doc), indent=2) + "\n"


def flatten(obj, prefix="") -> list[tuple[str, object]]:
    """``(dotted.key, scalar)`` pairs; list items are indexed."""
    out = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            out += flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list):
        if not obj:
            out.append((prefix, ""))
        for i, v in enumerate(obj):
            out += flatten(v, f"{prefix}.{i}")
    else:
        out.append((prefix, "" if obj is None else obj))
    return out


def records_to_csv(records: list[dict]) -> str:
    cols = list(RECORD_COLUMNS)
    if any("family" in r for r in records):
        cols.append("family")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for r in normalize(records):
        writer.writerow([r.get(c, "") for c in cols])
    return buf.getvalue()


def to_csv(doc: dict) -> str:
    """Spectrum-like documents become a record table, everything else key/value rows."""
    doc = normalize(doc)
    if isinstance(doc.get("result"), dict) and "records" in doc["result"]:
        return records_to_csv(doc["result"]["records"])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    for k, v in flatten(doc):
        writer.writerow([k, v])
    return buf.getvalue()


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return to_json(doc)
    if fmt == "csv":
        return to_csv(doc)
    raise ValueError(f"unknown format {fmt!r}")
