"""Chart query execution: filter, bin, group/aggregate, sort, limit.

Semantics, in evaluation order:

1. Filters: a row passes when every filter passes. Any comparison against
   a null cell is false. Ordering ops (<, <=, >, >=, in-range) require a
   quantitative column (temporal allowed for <,<=,>,>= via ISO string
   order); equality ops work on any type.
2. Binning: the binned column's values are replaced by equal-width bin
   edges computed over the filtered non-null values; rows with a null in
   the binned column are dropped. A projection of the binned column
   expands to "<col>_bin_start" and "<col>_bin_end".
3. Grouping: if any projection carries an aggregate, the non-aggregated
   projections act as group keys; groups appear in first-row order.
   Aggregates skip nulls; `count` counts rows in the group regardless of
   nulls; empty aggregates (all-null) yield null. Aggregated output
   columns are named "agg(column)".
4. Sort: by an output column name, stable, nulls last in both directions.
5. Limit: keeps the first N rows.
"""

from __future__ import annotations

import statistics
from typing import Optional

from vizcanvas.data.errors import InvalidBinCount, TypeMismatch, UnknownColumn
from vizcanvas.data.model import (
    AGGREGATES,
    ChartQuery,
    ColumnType,
    Dataset,
    DataTable,
    Filter,
    Value,
)

ORDERING_OPS = ("<", "<=", ">", ">=", "in-range")


def output_column_names(query: ChartQuery) -> list[str]:
    """Column names of the result table, in projection order."""
    binned = query.bins[0] if query.bins else None
    names: list[str] = []
    for proj in query.projections:
        if proj.aggregate is not None:
            names.append(f"{proj.aggregate}({proj.column})")
        elif proj.column == binned:
            names.append(f"{proj.column}_bin_start")
            names.append(f"{proj.column}_bin_end")
        else:
            names.append(proj.column)
    return names


def _check_query(dataset: Dataset, query: ChartQuery) -> None:
    for proj in query.projections:
        col = dataset.column(proj.column)
        if proj.aggregate is not None:
            if proj.aggregate not in AGGREGATES:
                raise ValueError(f"unknown aggregate {proj.aggregate!r}")
            if proj.aggregate in ("sum", "mean") and col.ctype is not ColumnType.QUANTITATIVE:
                raise TypeMismatch(
                    f"aggregate {proj.aggregate} requires a quantitative column, "
                    f"{proj.column!r} is {col.ctype.value}",
                    detail={"column": proj.column},
                )
    for flt in query.filters:
        col = dataset.column(flt.column)
        if flt.op not in ("=", "!=") + ORDERING_OPS:
            raise ValueError(f"unknown filter op {flt.op!r}")
        if flt.op == "in-range" and col.ctype is not ColumnType.QUANTITATIVE:
            raise TypeMismatch(
                f"in-range filter requires a quantitative column, {flt.column!r} is {col.ctype.value}",
                detail={"column": flt.column},
            )
        if flt.op in ("<", "<=", ">", ">=") and col.ctype is ColumnType.CATEGORICAL:
            raise TypeMismatch(
                f"ordering filter on categorical column {flt.column!r}",
                detail={"column": flt.column},
            )
    if query.bins is not None:
        bin_col, bin_count = query.bins
        col = dataset.column(bin_col)
        if col.ctype is not ColumnType.QUANTITATIVE:
            raise TypeMismatch(
                f"cannot bin non-quantitative column {bin_col!r}", detail={"column": bin_col}
            )
        if bin_count < 1:
            raise InvalidBinCount(f"bin count must be >= 1, got {bin_count}")
    if query.limit is not None and query.limit < 1:
        raise ValueError(f"limit must be positive, got {query.limit}")
    if query.sort is not None:
        sort_col, direction = query.sort
        if direction not in ("asc", "desc"):
            raise ValueError(f"unknown sort direction {direction!r}")
        if sort_col not in output_column_names(query):
            raise UnknownColumn(
                f"sort column {sort_col!r} is not an output column",
                detail={"column": sort_col},
            )


def _passes(cell: Value, flt: Filter) -> bool:
    if cell is None:
        return False
    if flt.op == "=":
        return cell == flt.value
    if flt.op == "!=":
        return cell != flt.value
    if flt.op == "in-range":
        lo, hi = flt.value  # type: ignore[misc]
        return lo <= cell <= hi
    try:
        if flt.op == "<":
            return cell < flt.value  # type: ignore[operator]
        if flt.op == "<=":
            return cell <= flt.value  # type: ignore[operator]
        if flt.op == ">":
            return cell > flt.value  # type: ignore[operator]
        if flt.op == ">=":
            return cell >= flt.value  # type: ignore[operator]
    except TypeError:
        raise TypeMismatch(
            f"cannot compare column value {cell!r} with literal {flt.value!r}",
            detail={"column": flt.column},
        )
    raise ValueError(f"unknown filter op {flt.op!r}")


def _bin_edges(values: list[float], bin_count: int) -> Optional[tuple[float, float, float]]:
    """Returns (lo, hi, width) or None when there is nothing to bin."""
    if not values:
        return None
    lo, hi = min(values), max(values)
    width = (hi - lo) / bin_count
    return lo, hi, width


def _bin_of(value: float, lo: float, width: float, bin_count: int) -> int:
    if width == 0:
        return 0
    idx = int((value - lo) / width)
    return min(max(idx, 0), bin_count - 1)


def _aggregate(agg: str, values: list[Value], group_size: int) -> Value:
    if agg == "count":
        return float(group_size)
    non_null = [v for v in values if v is not None]
    if not non_null:
        return None
    if agg == "sum":
        return float(sum(non_null))  # type: ignore[arg-type]
    if agg == "mean":
        return statistics.fmean(non_null)  # type: ignore[arg-type]
    if agg == "min":
        return min(non_null)
    if agg == "max":
        return max(non_null)
    raise ValueError(f"unknown aggregate {agg!r}")


def execute_query(dataset: Dataset, query: ChartQuery) -> DataTable:
    """Execute a validated chart query against a dataset."""
    _check_query(dataset, query)
    names = output_column_names(query)

    col_cells = {col.name: col.cells for col in dataset.columns}
    row_indices = list(range(dataset.row_count))

    # 1. filters
    for flt in query.filters:
        cells = col_cells[flt.column]
        row_indices = [i for i in row_indices if _passes(cells[i], flt)]

    # 2. binning
    bin_col = query.bins[0] if query.bins else None
    bins_of_row: dict[int, tuple[float, float]] = {}
    if query.bins is not None:
        bin_count = query.bins[1]
        cells = col_cells[bin_col]  # type: ignore[index]
        row_indices = [i for i in row_indices if cells[i] is not None]
        edges = _bin_edges([cells[i] for i in row_indices], bin_count)  # type: ignore[misc]
        if edges is not None:
            lo, hi, width = edges
            for i in row_indices:
                idx = _bin_of(cells[i], lo, width, bin_count)  # type: ignore[arg-type]
                if width == 0:
                    bins_of_row[i] = (lo, hi)
                else:
                    bins_of_row[i] = (lo + idx * width, lo + (idx + 1) * width)

    def projected(i: int, proj_column: str) -> tuple:
        """Key/output cells a non-aggregated projection contributes for row i."""
        if proj_column == bin_col:
            return bins_of_row[i]
        return (col_cells[proj_column][i],)

    # 3. grouping / projection
    rows: list[list[Value]] = []
    if query.has_aggregates():
        key_projs = [p for p in query.projections if p.aggregate is None]
        groups: dict[tuple, list[int]] = {}
        order: list[tuple] = []
        for i in row_indices:
            key = tuple(cell for p in key_projs for cell in projected(i, p.column))
            if key not in groups:
                groups[key] = []
                order.append(key)
            groups[key].append(i)
        for key in order:
            members = groups[key]
            row: list[Value] = []
            key_iter = iter(key)
            for proj in query.projections:
                if proj.aggregate is None:
                    row.append(next(key_iter))
                    if proj.column == bin_col:
                        row.append(next(key_iter))
                else:
                    values = [col_cells[proj.column][i] for i in members]
                    row.append(_aggregate(proj.aggregate, values, len(members)))
            rows.append(row)
    else:
        for i in row_indices:
            row = []
            for proj in query.projections:
                row.extend(projected(i, proj.column))
            rows.append(row)

    # 4. sort (stable, nulls last in both directions)
    if query.sort is not None:
        sort_col, direction = query.sort
        idx = names.index(sort_col)
        non_null_rows = [r for r in rows if r[idx] is not None]
        null_rows = [r for r in rows if r[idx] is None]
        non_null_rows.sort(key=lambda r: r[idx], reverse=(direction == "desc"))
        rows = non_null_rows + null_rows

    # 5. limit
    if query.limit is not None:
        rows = rows[: query.limit]

    return DataTable(column_names=names, rows=rows)
