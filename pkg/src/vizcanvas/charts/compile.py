"""Lower a valid chart spec to a data query and a render payload.

The payload bundles the executed data table with a Vega-Lite-compatible
grammar document carrying inline ``values``, so any standard grammar
renderer can display it. Compilation is deterministic: equal
(spec, dataset) inputs produce byte-equal grammar JSON.

Heatmaps are the one mark whose data does not come from execute_query:
they render the pairwise-complete correlation matrix over
``matrix_columns`` as a long-form (column_x, column_y, correlation)
table.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from vizcanvas.charts.spec import (
    CHANNELS,
    DEFAULT_BIN_COUNT,
    BinTransform,
    ChartSpec,
    Encoding,
    FilterTransform,
    TopKLabelTransform,
)
from vizcanvas.data.model import (
    ChartQuery,
    ColumnType,
    Dataset,
    DataTable,
    Filter,
    Projection,
)
from vizcanvas.data.query import execute_query
from vizcanvas.data.stats import correlation_matrix, quantile_labels

VEGA_LITE_SCHEMA = "https://vega.github.io/schema/vega-lite/v5.json"

LABEL_FIELD = "quantile_label"


@dataclass
class RenderPayload:
    spec: ChartSpec
    data: DataTable
    grammar_json: str
    labels: Optional[dict[str, list[int]]] = None  # topk-label row indices

    def to_json_dict(self) -> dict:
        return {
            "spec": self.spec.to_json_dict(),
            "data": {"column_names": self.data.column_names, "rows": self.data.rows},
            "labels": self.labels,
            "grammar_json": self.grammar_json,
        }


def resolve_spec_columns(spec: ChartSpec, dataset: Dataset) -> ChartSpec:
    """Rewrite column references to their canonical dataset spelling
    (case-insensitive resolution); unresolvable names pass through and
    fail later with UnknownColumn."""
    resolved = spec.copy()
    for enc in resolved.encodings.values():
        canonical = dataset.resolve_column(enc.column)
        if canonical is not None:
            enc.column = canonical
    for transform in resolved.transforms:
        column = getattr(transform, "column", None)
        if column is not None:
            canonical = dataset.resolve_column(column)
            if canonical is not None:
                transform.column = canonical
    if resolved.matrix_columns is not None:
        resolved.matrix_columns = [
            dataset.resolve_column(c) or c for c in resolved.matrix_columns
        ]
    return resolved


def spec_to_query(spec: ChartSpec) -> ChartQuery:
    """Deterministic lowering of a valid spec to an executable query.

    Encodings become projections in fixed channel order; filter
    transforms become query filters; histograms bin x (bin transform
    count if present, else the default) and count rows per bin.
    Topk-label transforms are not part of the query; they run as a
    post-query labeling pass recorded in the payload.
    """
    filters = [
        Filter(column=t.column, op=t.op, value=t.value)
        for t in spec.transforms
        if isinstance(t, FilterTransform)
    ]

    if spec.mark == "heatmap":
        projections = [Projection(column=c) for c in (spec.matrix_columns or [])]
        return ChartQuery(source="", projections=projections, filters=filters)

    if spec.mark == "histogram":
        x = spec.encodings["x"].column
        bin_count = DEFAULT_BIN_COUNT
        for t in spec.transforms:
            if isinstance(t, BinTransform) and t.column == x:
                bin_count = t.bin_count
                break
        projections = [Projection(column=x), Projection(column=x, aggregate="count")]
        return ChartQuery(source="", projections=projections, filters=filters,
                          bins=(x, bin_count))

    projections = []
    for channel in CHANNELS:
        enc = spec.encodings.get(channel)
        if enc is None:
            continue
        projections.append(Projection(column=enc.column, aggregate=enc.aggregate))
    bins = None
    for t in spec.transforms:
        if isinstance(t, BinTransform):
            bins = (t.column, t.bin_count)
            break
    return ChartQuery(source="", projections=projections, filters=filters, bins=bins)


def _topk_transform(spec: ChartSpec) -> Optional[TopKLabelTransform]:
    for t in spec.transforms:
        if isinstance(t, TopKLabelTransform):
            return t
    return None


def _output_field(enc: Encoding) -> str:
    if enc.aggregate is not None:
        return f"{enc.aggregate}({enc.column})"
    return enc.column


def _vega_type(dataset: Dataset, enc: Encoding) -> str:
    if enc.aggregate == "count":
        return "quantitative"
    canonical = dataset.resolve_column(enc.column)
    ctype = dataset.column(canonical).ctype if canonical else ColumnType.CATEGORICAL
    if enc.aggregate in ("sum", "mean"):
        return "quantitative"
    return {
        ColumnType.QUANTITATIVE: "quantitative",
        ColumnType.CATEGORICAL: "nominal",
        ColumnType.TEMPORAL: "temporal",
    }[ctype]


def _encoding_block(dataset: Dataset, enc: Encoding) -> dict:
    block: dict = {"field": _output_field(enc), "type": _vega_type(dataset, enc)}
    if enc.scale == "log":
        block["scale"] = {"type": "log"}
    return block


def _grammar_values(data: DataTable, labels: Optional[dict[str, list[int]]]) -> list[dict]:
    records = data.to_records()
    if labels is not None:
        top = set(labels["top"])
        bottom = set(labels["bottom"])
        for i, record in enumerate(records):
            record[LABEL_FIELD] = "top" if i in top else ("bottom" if i in bottom else "")
    return records


def _mark_encoding(spec: ChartSpec, dataset: Dataset) -> tuple[str, dict]:
    encoding: dict = {}
    if spec.mark == "histogram":
        x = spec.encodings["x"]
        encoding["x"] = {
            "field": f"{x.column}_bin_start",
            "bin": "binned",
            "type": "quantitative",
        }
        if x.scale == "log":
            encoding["x"]["scale"] = {"type": "log"}
        encoding["x2"] = {"field": f"{x.column}_bin_end"}
        encoding["y"] = {"field": f"count({x.column})", "type": "quantitative"}
        return "bar", encoding
    marks = {"scatter": "point", "bar": "bar", "line": "line"}
    for channel in CHANNELS:
        enc = spec.encodings.get(channel)
        if enc is None:
            continue
        if channel == "label":
            encoding["tooltip"] = _encoding_block(dataset, enc)
        else:
            encoding[channel] = _encoding_block(dataset, enc)
    return marks[spec.mark], encoding


def _build_grammar(spec: ChartSpec, dataset: Dataset, data: DataTable,
                   labels: Optional[dict[str, list[int]]]) -> str:
    doc: dict = {
        "$schema": VEGA_LITE_SCHEMA,
        "title": spec.title,
        "data": {"values": _grammar_values(data, labels)},
    }
    if spec.mark == "heatmap":
        doc["mark"] = "rect"
        doc["encoding"] = {
            "x": {"field": "column_x", "type": "nominal"},
            "y": {"field": "column_y", "type": "nominal"},
            "color": {
                "field": "correlation",
                "type": "quantitative",
                "scale": {"domain": [-1, 1], "scheme": "blueorange"},
            },
        }
    else:
        mark, encoding = _mark_encoding(spec, dataset)
        if labels is not None:
            label_layer_encoding = {
                key: {"field": encoding[key]["field"], "type": encoding[key]["type"]}
                for key in ("x", "y")
                if key in encoding
            }
            label_layer_encoding["text"] = {"field": LABEL_FIELD, "type": "nominal"}
            doc["layer"] = [
                {"mark": mark, "encoding": encoding},
                {
                    "mark": {"type": "text", "dy": -8},
                    "transform": [{"filter": f"datum.{LABEL_FIELD} !== ''"}],
                    "encoding": label_layer_encoding,
                },
            ]
        else:
            doc["mark"] = mark
            doc["encoding"] = encoding
    return json.dumps(doc, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def compile_spec(spec: ChartSpec, dataset: Dataset) -> RenderPayload:
    """Execute the lowered query and build the grammar document.

    Precondition: the spec validates against the dataset. Data-engine
    errors (unknown column, type mismatch) propagate.
    """
    resolved = resolve_spec_columns(spec, dataset)

    if resolved.mark == "heatmap":
        columns = resolved.matrix_columns or []
        matrix = correlation_matrix(dataset, columns)
        rows = []
        for i, a in enumerate(columns):
            for j, b in enumerate(columns):
                rows.append([a, b, matrix[i][j]])
        data = DataTable(column_names=["column_x", "column_y", "correlation"], rows=rows)
        grammar = _build_grammar(resolved, dataset, data, None)
        return RenderPayload(spec=resolved, data=data, grammar_json=grammar)

    query = spec_to_query(resolved)
    query.source = dataset.id
    data = execute_query(dataset, query)

    labels = None
    topk = _topk_transform(resolved)
    if topk is not None and data.rows:
        y_enc = resolved.encodings.get("y")
        if topk.column is not None:
            field = topk.column
            # The labeled field must exist in the output table; aggregated
            # outputs are named "agg(column)".
            if field not in data.column_names:
                for channel in CHANNELS:
                    candidate = resolved.encodings.get(channel)
                    if candidate is not None and candidate.column == field:
                        field = _output_field(candidate)
                        break
        else:
            field = _output_field(y_enc) if y_enc is not None else data.column_names[0]
        labels = quantile_labels(data, field, topk.fraction)

    grammar = _build_grammar(resolved, dataset, data, labels)
    return RenderPayload(spec=resolved, data=data, grammar_json=grammar, labels=labels)
