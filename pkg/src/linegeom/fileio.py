"""JSON formats for structures, audit reports and mutation manifests.

A structure file stores one hex string per line: row ``i`` read as a
big-endian hex integer has bit ``j`` set iff line ``i`` is incident to line
``j`` (bit 0 is the least significant bit of the last digit).  Every row is
zero-padded to ``ceil(n / 4)`` digits.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from .errors import InvalidStructure, StructureFormatError
from .structure import IncidenceStructure

FORMAT_VERSION = 1


def structure_to_dict(s):
    out = {"format_version": FORMAT_VERSION}
    if s.q is not None:
        out["q"] = s.q
    out["labels"] = list(s.labels)
    out["incidence_rows"] = s.hex_rows()
    return out


def structure_from_dict(data):
    if not isinstance(data, dict):
        raise StructureFormatError("structure file must hold a JSON object")
    if data.get("format_version") != FORMAT_VERSION:
        raise StructureFormatError(f"unsupported format_version {data.get('format_version')!r}")
    labels = data.get("labels")
    rows = data.get("incidence_rows")
    if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
        raise StructureFormatError("labels must be a list of strings")
    if not isinstance(rows, list) or len(rows) != len(labels):
        raise StructureFormatError("incidence_rows must have one entry per label")
    q = data.get("q")
    if q is not None and (not isinstance(q, int) or isinstance(q, bool)):
        raise StructureFormatError("q must be an integer when present")
    width = max(1, -(-len(labels) // 4))
    parsed = []
    for i, row in enumerate(rows):
        if not isinstance(row, str) or len(row) != width:
            raise StructureFormatError(f"row {i} must be a hex string of {width} digits")
        try:
            parsed.append(int(row, 16))
        except ValueError:
            raise StructureFormatError(f"row {i} is not hexadecimal") from None
    try:
        return IncidenceStructure(tuple(labels), tuple(parsed), q)
    except InvalidStructure as exc:
        raise StructureFormatError(str(exc)) from exc


def dumps(data):
    return json.dumps(data, indent=2) + "\n"


def atomic_write(path, text):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_structure(s, path):
    atomic_write(path, dumps(structure_to_dict(s)))


def load_structure(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise StructureFormatError(f"{path}: not UTF-8 text") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructureFormatError(f"{path}: {exc}") from exc
    return structure_from_dict(data)


def _label_value(s, value):
    if isinstance(value, tuple):
        return [_label_value(s, v) for v in value]
    return s.labels[value]


def report_to_dict(report, s):
    """Serialize with witnesses given as line labels."""
    items = []
    for it in report.items:
        witness = None
        if it.witness:
            witness = {role: _label_value(s, value) for role, value in it.witness}
        items.append({
            "name": it.name,
            "status": it.status,
            "cases_checked": it.cases_checked,
            "witness": witness,
            "elapsed_ms": round(it.elapsed * 1000, 3),
            "notes": list(it.notes),
        })
    return {
        "format_version": FORMAT_VERSION,
        "structure_digest": report.digest,
        "profile": report.profile,
        "seed": report.seed,
        "overall": report.overall,
        "items": items,
    }


def strip_timing(report_dict):
    out = dict(report_dict)
    out["items"] = [{k: v for k, v in it.items() if k != "elapsed_ms"} for it in report_dict["items"]]
    return out


def save_report(report, s, path):
    atomic_write(path, dumps(report_to_dict(report, s)))
