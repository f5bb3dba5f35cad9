"""CSV / JSON writers and readers for sweep and point results.

CSV: ',' delimiter, '.' decimal point, LF line endings, header always
present. JSON: an object with ``meta`` and ``rows``. Floats are written with
``precision`` significant digits; 17 round-trips every double exactly.
"""
from __future__ import annotations

import csv
import io
import json
import math

__all__ = ["format_value", "read_table", "to_csv", "to_json"]


def format_value(v, precision: int = 17) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        text = f"{v:.{precision}g}"
        # keep integral floats (and -0.0) distinguishable from integer cells
        return text if any(ch in text for ch in ".e") else text + ".0"
    if v is None:
        return ""
    return str(v)


def to_csv(columns: list[str], rows: list[dict], precision: int = 17) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([format_value(r.get(c), precision) for c in columns])
    return buf.getvalue()


def _json_value(v, precision: int):
    if isinstance(v, float):
        if not math.isfinite(v):
            return format_value(v)
        return float(format_value(v, precision))
    if isinstance(v, complex):
        return [_json_value(v.real, precision), _json_value(v.imag, precision)]
    if isinstance(v, dict):
        return {k: _json_value(x, precision) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x, precision) for x in v]
    return v


def to_json(meta: dict, rows: list[dict], precision: int = 17) -> str:
    doc = {"meta": _json_value(meta, 17), "rows": _json_value(rows, precision)}
    return json.dumps(doc, indent=1) + "\n"


def _parse_cell(s: str):
    if s == "":
        return None
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        return s


def read_table(text: str) -> tuple[dict, list[str], list[dict]]:
    """Parse either output format back to (meta, columns, rows)."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        doc = json.loads(text)
        if not isinstance(doc, dict) or "rows" not in doc or "meta" not in doc:
            raise ValueError("JSON document must have 'meta' and 'rows' keys")
        rows = doc["rows"]
        rows = [
            {k: (float(v) if v in ("nan", "inf", "-inf") else v) for k, v in r.items()} for r in rows
        ]
        columns = list(rows[0].keys()) if rows else []
        return doc["meta"], columns, rows
    reader = csv.reader(io.StringIO(text))
    try:
        columns = next(reader)
    except StopIteration:
        raise ValueError("empty CSV") from None
    rows = [dict(zip(columns, (_parse_cell(c) for c in line))) for line in reader if line]
    return {}, columns, rows
