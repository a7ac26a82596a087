"""Pearson correlation matrix and top/bottom quantile labeling."""

from __future__ import annotations

import math
import statistics
from typing import Optional

from vizcanvas.data.errors import (
    EmptyTable,
    FieldNotNumeric,
    NonQuantitativeColumn,
    UnknownColumn,
)
from vizcanvas.data.model import ColumnType, Dataset, DataTable


def _pairwise_pearson(xs: list, ys: list) -> Optional[float]:
    """Pearson coefficient over rows where both cells are non-null.

    Returns None with fewer than 2 complete pairs or zero variance on
    either side.
    """
    pairs = [(x, y) for x, y in zip(xs, ys) if x is not None and y is not None]
    if len(pairs) < 2:
        return None
    px = [p[0] for p in pairs]
    py = [p[1] for p in pairs]
    try:
        r = statistics.correlation(px, py)
    except statistics.StatisticsError:
        return None  # zero variance
    if math.isnan(r):
        return None
    return min(1.0, max(-1.0, r))


def correlation_matrix(
    dataset: Dataset, columns: list[str]
) -> list[list[Optional[float]]]:
    """Square pairwise-complete Pearson matrix over quantitative columns.

    Symmetric by construction; the diagonal is exactly 1.0 for columns
    with at least two distinct non-null values and null otherwise.
    """
    if len(columns) < 2:
        raise ValueError("correlation matrix needs at least 2 columns")
    cells: list[list] = []
    for name in columns:
        if not dataset.has_column(name):
            raise UnknownColumn(f"no column named {name!r}", detail={"column": name})
        col = dataset.column(name)
        if col.ctype is not ColumnType.QUANTITATIVE:
            raise NonQuantitativeColumn(
                f"column {name!r} is {col.ctype.value}", detail={"column": name}
            )
        cells.append(col.cells)

    n = len(columns)
    matrix: list[list[Optional[float]]] = [[None] * n for _ in range(n)]
    for i in range(n):
        non_null = [c for c in cells[i] if c is not None]
        if len(set(non_null)) >= 2:
            matrix[i][i] = 1.0
    for i in range(n):
        for j in range(i + 1, n):
            r = _pairwise_pearson(cells[i], cells[j])
            matrix[i][j] = r
            matrix[j][i] = r
    return matrix


def quantile_labels(table: DataTable, field: str, p: float) -> dict[str, list[int]]:
    """Label the ceil(n*p) largest rows "top" and smallest "bottom".

    Rows are ordered once by value with ties kept in row order; bottom
    labels come from the start of that order and top labels from the end,
    so the two sets are disjoint whenever 2*ceil(n*p) <= n. Rows with a
    null field value are ineligible.
    """
    if not 0 < p < 0.5:
        raise ValueError(f"p must be in (0, 0.5), got {p}")
    if not table.rows:
        raise EmptyTable("cannot label an empty table")
    values = table.column_values(field)
    for v in values:
        if v is not None and not isinstance(v, (int, float)):
            raise FieldNotNumeric(
                f"field {field!r} holds non-numeric value {v!r}", detail={"field": field}
            )
    n = len(table.rows)
    k = math.ceil(n * p)
    eligible = [i for i in range(n) if values[i] is not None]
    ordered = sorted(eligible, key=lambda i: values[i])  # stable: ties in row order
    bottom = ordered[:k]
    top = ordered[-k:] if k <= len(ordered) else list(ordered)
    return {"top": sorted(top), "bottom": sorted(bottom)}
