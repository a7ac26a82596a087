"""CSV ingestion with type inference and numeric normalization.

Dialect: comma-delimited, RFC-4180 quoting, first record is the header.
Numeric normalization strips exactly a leading "$", a trailing "%", and
interior "," thousands separators; anything else must parse as a plain
float. Empty strings are null.
"""

from __future__ import annotations

import csv
import io
import math
from datetime import date, datetime
from typing import Optional

from vizcanvas.data.errors import DuplicateHeader, EmptyInput, RaggedRows
from vizcanvas.data.model import Column, ColumnType, Dataset
from vizcanvas.ids import new_id

# A column is quantitative (or temporal) when at least this share of its
# non-null cells parses; tolerates sporadic dirty cells.
TYPE_THRESHOLD = 0.9


def normalize_numeric(text: str) -> Optional[float]:
    """Parse a cell as a number, or return None.

    Rejects NaN and infinities so quantitative columns only ever hold
    finite values.
    """
    s = text.strip()
    if s.startswith("$"):
        s = s[1:]
    if s.endswith("%"):
        s = s[:-1]
    s = s.replace(",", "")
    if not s:
        return None
    try:
        value = float(s)
    except ValueError:
        return None
    if not math.isfinite(value):
        return None
    return value


def _parses_as_date(text: str) -> bool:
    s = text.strip()
    if not s:
        return False
    try:
        date.fromisoformat(s)
        return True
    except ValueError:
        pass
    try:
        datetime.fromisoformat(s.replace("Z", "+00:00"))
        return True
    except ValueError:
        return False


def infer_column_type(cells: list[Optional[str]]) -> ColumnType:
    """Infer a column type from raw text cells.

    Quantitative iff >=90% of non-null cells parse as numbers after
    normalization; temporal iff >=90% parse as ISO-8601 dates and the
    column is not quantitative; categorical otherwise (including the
    no-evidence case).
    """
    non_null = [c for c in cells if c is not None and c != ""]
    if not non_null:
        return ColumnType.CATEGORICAL
    numeric = sum(1 for c in non_null if normalize_numeric(c) is not None)
    if numeric / len(non_null) >= TYPE_THRESHOLD:
        return ColumnType.QUANTITATIVE
    dateish = sum(1 for c in non_null if _parses_as_date(c))
    if dateish / len(non_null) >= TYPE_THRESHOLD:
        return ColumnType.TEMPORAL
    return ColumnType.CATEGORICAL


def _convert(raw: Optional[str], ctype: ColumnType):
    if raw is None or raw == "":
        return None
    if ctype is ColumnType.QUANTITATIVE:
        # Dirty cells below the inference threshold become null so the
        # finite-number invariant holds.
        return normalize_numeric(raw)
    return raw


def ingest_csv(raw: bytes, name: str) -> Dataset:
    """Ingest a UTF-8 CSV byte stream into a typed, normalized Dataset."""
    text = raw.decode("utf-8")
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyInput("CSV input has no header row")
    names = [h.strip() for h in header]
    if not names or all(n == "" for n in names):
        raise EmptyInput("CSV header row is empty")
    seen: set[str] = set()
    for n in names:
        if n in seen:
            raise DuplicateHeader(f"duplicate column name {n!r}", detail={"column": n})
        seen.add(n)

    raw_columns: list[list[Optional[str]]] = [[] for _ in names]
    row_count = 0
    for record_no, record in enumerate(reader, start=2):
        if not record:
            continue  # blank line, permitted by RFC-4180 at end of file
        if len(record) != len(names):
            raise RaggedRows(
                f"row {record_no} has {len(record)} fields, header has {len(names)}",
                detail={"row": record_no, "fields": len(record), "expected": len(names)},
            )
        for i, cell in enumerate(record):
            raw_columns[i].append(cell if cell != "" else None)
        row_count += 1

    columns = []
    for col_name, cells in zip(names, raw_columns):
        ctype = infer_column_type(cells)
        columns.append(
            Column(name=col_name, ctype=ctype, cells=[_convert(c, ctype) for c in cells])
        )
    return Dataset(id=new_id("ds"), name=name, columns=columns, row_count=row_count)
