"""Core tabular types: datasets, columns, queries, and result tables."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Union

Value = Union[float, str, None]

AGGREGATES = ("sum", "mean", "count", "min", "max")

FILTER_OPS = ("=", "!=", "<", "<=", ">", ">=", "in-range")


class ColumnType(str, enum.Enum):
    QUANTITATIVE = "quantitative"
    CATEGORICAL = "categorical"
    TEMPORAL = "temporal"


@dataclass
class Column:
    name: str
    ctype: ColumnType
    cells: list[Value]


@dataclass
class Dataset:
    """Immutable after ingestion; all cells in a quantitative column are finite floats or None."""

    id: str
    name: str
    columns: list[Column]
    row_count: int

    def column(self, name: str) -> Column:
        from vizcanvas.data.errors import UnknownColumn

        for col in self.columns:
            if col.name == name:
                return col
        raise UnknownColumn(f"no column named {name!r}", detail={"column": name})

    def column_names(self) -> list[str]:
        return [c.name for c in self.columns]

    def has_column(self, name: str) -> bool:
        return any(c.name == name for c in self.columns)

    def resolve_column(self, name: str) -> Optional[str]:
        """Resolve a column reference: exact match first, then a unique
        case-insensitive match. Returns the canonical name or None."""
        if self.has_column(name):
            return name
        lowered = name.strip().lower()
        hits = [c.name for c in self.columns if c.name.lower() == lowered]
        if len(hits) == 1:
            return hits[0]
        return None


@dataclass
class ColumnProfile:
    name: str
    ctype: ColumnType
    non_null_count: int
    null_count: int
    distinct_count: int
    min: Optional[float] = None
    max: Optional[float] = None
    mean: Optional[float] = None
    stddev: Optional[float] = None
    sample_values: list[Value] = field(default_factory=list)


@dataclass(frozen=True)
class Projection:
    column: str
    aggregate: Optional[str] = None  # one of AGGREGATES


@dataclass(frozen=True)
class Filter:
    column: str
    op: str  # one of FILTER_OPS
    value: Value | tuple[float, float]  # (lo, hi) for in-range


@dataclass
class ChartQuery:
    """Executable data-shaping plan.

    If any projection carries an aggregate, the non-aggregated projections
    act as group keys.
    """

    source: str
    projections: list[Projection] = field(default_factory=list)
    filters: list[Filter] = field(default_factory=list)
    bins: Optional[tuple[str, int]] = None  # (column, bin_count)
    sort: Optional[tuple[str, str]] = None  # (output column, "asc" | "desc")
    limit: Optional[int] = None

    def has_aggregates(self) -> bool:
        return any(p.aggregate is not None for p in self.projections)


@dataclass
class DataTable:
    column_names: list[str]
    rows: list[list[Value]]

    def column_index(self, name: str) -> int:
        from vizcanvas.data.errors import UnknownColumn

        try:
            return self.column_names.index(name)
        except ValueError:
            raise UnknownColumn(f"no column named {name!r} in table", detail={"column": name})

    def column_values(self, name: str) -> list[Value]:
        idx = self.column_index(name)
        return [row[idx] for row in self.rows]

    def to_records(self) -> list[dict]:
        return [dict(zip(self.column_names, row)) for row in self.rows]
