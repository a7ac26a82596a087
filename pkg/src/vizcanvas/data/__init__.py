"""Dataset ingestion, profiling, and chart data queries."""

from vizcanvas.data.errors import (
    DuplicateHeader,
    EmptyInput,
    EmptyTable,
    FieldNotNumeric,
    InvalidBinCount,
    NonQuantitativeColumn,
    RaggedRows,
    TypeMismatch,
    UnknownColumn,
)
from vizcanvas.data.ingest import infer_column_type, ingest_csv, normalize_numeric
from vizcanvas.data.model import (
    AGGREGATES,
    ChartQuery,
    Column,
    ColumnProfile,
    ColumnType,
    Dataset,
    DataTable,
    Filter,
    Projection,
)
from vizcanvas.data.profile import DatasetSummary, profile_column, summarize_dataset
from vizcanvas.data.query import execute_query
from vizcanvas.data.stats import correlation_matrix, quantile_labels

__all__ = [
    "AGGREGATES",
    "ChartQuery",
    "Column",
    "ColumnProfile",
    "ColumnType",
    "Dataset",
    "DataTable",
    "DatasetSummary",
    "DuplicateHeader",
    "EmptyInput",
    "EmptyTable",
    "FieldNotNumeric",
    "Filter",
    "InvalidBinCount",
    "NonQuantitativeColumn",
    "Projection",
    "RaggedRows",
    "TypeMismatch",
    "UnknownColumn",
    "correlation_matrix",
    "execute_query",
    "infer_column_type",
    "ingest_csv",
    "normalize_numeric",
    "profile_column",
    "quantile_labels",
    "summarize_dataset",
]
