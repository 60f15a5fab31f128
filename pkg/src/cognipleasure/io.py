"""CSV ingestion of appraisal predictions and label files."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .appraisal import APPRAISAL_FIELDS, SCALE_MAX, SCALE_MIN, AppraisalVector
from .errors import DataError
from .pa_space import Label

REQUIRED_COLUMNS = ("utterance_id",) + tuple(v.value for v in APPRAISAL_FIELDS)
GOLD_VALUE_COLUMNS = {f"gold_{v.value}": v.value for v in APPRAISAL_FIELDS}


@dataclass(frozen=True)
class AppraisalRecord:
    vector: AppraisalVector
    gold_label2: Label | None = None
    gold_label3: Label | None = None
    gold_values: dict[str, float] = field(default_factory=dict)

    @property
    def utterance_id(self) -> str:
        return self.vector.utterance_id


def _number(cell: str, row: int, column: str) -> float:
    try:
        value = float(cell)
    except (TypeError, ValueError):
        raise DataError(f"not a number: {cell!r}", row=row, column=column) from None
    if not math.isfinite(value) or not SCALE_MIN <= value <= SCALE_MAX:
        raise DataError(f"value {value:g} outside [{SCALE_MIN:g}, {SCALE_MAX:g}]", row=row, column=column)
    return value


def _label(cell: str, row: int, column: str, allowed) -> Label | None:
    if cell is None or not cell.strip():
        return None
    try:
        label = Label.parse(cell)
    except ValueError:
        label = None
    if label not in allowed:
        raise DataError(f"unknown label {cell!r}", row=row, column=column)
    return label


def _read_rows(path: Path):
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh, skipinitialspace=True)
        header = [h.strip() for h in (reader.fieldnames or [])]
        reader.fieldnames = header
        rows = list(reader)
    return header, rows


def load_appraisals(path: str | Path) -> list[AppraisalRecord]:
    """Validated appraisal records, one per data row.

    Errors carry the file line number (header = 1) and column name.
    """
    path = Path(path)
    header, rows = _read_rows(path)
    if not header:
        return []
    missing = [c for c in REQUIRED_COLUMNS if c not in header]
    if missing:
        raise DataError(f"missing required column(s): {', '.join(missing)}", row=1, column=missing[0])

    records, seen = [], {}
    for line, row in enumerate(rows, start=2):
        if None in row:
            raise DataError("more cells than header columns", row=line)
        uid = (row["utterance_id"] or "").strip()
        if not uid:
            raise DataError("empty utterance_id", row=line, column="utterance_id")
        if uid in seen:
            raise DataError(f"duplicate utterance_id {uid!r} (first on row {seen[uid]})", row=line, column="utterance_id")
        seen[uid] = line
        values = {v.value: _number(row[v.value], line, v.value) for v in APPRAISAL_FIELDS}
        gold_values = {
            var: _number(row[col], line, col)
            for col, var in GOLD_VALUE_COLUMNS.items()
            if col in row and row[col] is not None and row[col].strip()
        }
        records.append(
            AppraisalRecord(
                vector=AppraisalVector.from_mapping(uid, values),
                gold_label2=_label(row.get("gold_label2"), line, "gold_label2", (Label.PLEASANT, Label.UNPLEASANT)),
                gold_label3=_label(row.get("gold_label3"), line, "gold_label3", tuple(Label)),
                gold_values=gold_values,
            )
        )
    return records


def read_column(path: str | Path, column: str) -> list[float]:
    """All values of one numeric column of a CSV file."""
    path = Path(path)
    header, rows = _read_rows(path)
    if column not in header:
        raise DataError(f"no column {column!r} in {path.name}", row=1, column=column)
    return [_number(row[column], line, column) for line, row in enumerate(rows, start=2)]


def read_labels(path: str | Path, classes: int, prefer: str) -> dict[str, Label]:
    """Map utterance_id to a label from an inference report or a CSV file.

    JSON Lines reports use ``label2``/``label3``. CSV files may use either
    ``label<n>`` or ``gold_label<n>``; ``prefer`` picks which is tried first.
    """
    path = Path(path)
    names = [f"label{classes}", f"gold_label{classes}"]
    if prefer == "gold":
        names.reverse()
    allowed = (Label.PLEASANT, Label.UNPLEASANT) if classes == 2 else tuple(Label)

    out: dict[str, Label] = {}
    if path.suffix.lower() in (".jsonl", ".json"):
        for line, text in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
            if not text.strip():
                continue
            try:
                obj = json.loads(text)
            except json.JSONDecodeError as exc:
                raise DataError(f"invalid JSON ({exc.msg})", row=line) from None
            column = next((n for n in names if n in obj), None)
            if column is None or "utterance_id" not in obj:
                raise DataError(f"record lacks utterance_id or {names[0]}", row=line)
            uid = str(obj["utterance_id"])
            if uid in out:
                raise DataError(f"duplicate utterance_id {uid!r}", row=line)
            label = _label(str(obj[column] or ""), line, column, allowed)
            if label is None:
                raise DataError("missing label", row=line, column=column)
            out[uid] = label
        return out

    header, rows = _read_rows(path)
    if not header:
        return out
    column = next((n for n in names if n in header), None)
    if column is None or "utterance_id" not in header:
        raise DataError(f"{path.name} needs utterance_id and one of {names}", row=1)
    for line, row in enumerate(rows, start=2):
        uid = (row["utterance_id"] or "").strip()
        if uid in out:
            raise DataError(f"duplicate utterance_id {uid!r}", row=line, column="utterance_id")
        label = _label(row[column], line, column, allowed)
        if label is None:
            raise DataError("missing label", row=line, column=column)
        out[uid] = label
    return out
