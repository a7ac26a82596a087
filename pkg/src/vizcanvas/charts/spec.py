"""Declarative chart specification and its JSON schema.

A spec is one visualization: a mark, channel encodings, and optional
transforms. Serialization is canonical (fixed key order, no whitespace)
so equal specs are byte-equal, and deserialization rejects unknown
spec versions loudly.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from typing import Any, Optional, Union

from vizcanvas.charts.errors import MalformedSpec, UnsupportedSpecVersion
from vizcanvas.data.model import AGGREGATES, FILTER_OPS

SPEC_VERSION = 1

MARKS = ("scatter", "bar", "line", "histogram", "heatmap")

# Channel iteration order is fixed so lowering and serialization are
# deterministic.
CHANNELS = ("x", "y", "color", "size", "label")
OPTIONAL_CHANNELS = ("color", "size", "label")

REQUIRED_CHANNELS = {
    "scatter": ("x", "y"),
    "line": ("x", "y"),
    "bar": ("x", "y"),
    "histogram": ("x",),
    "heatmap": (),  # matrix intent: needs matrix_columns instead
}

SCALES = ("linear", "log")

DEFAULT_BIN_COUNT = 10
DEFAULT_BAR_AGGREGATE = "mean"


@dataclass
class Encoding:
    column: str
    aggregate: Optional[str] = None  # one of AGGREGATES
    scale: Optional[str] = None  # one of SCALES

    def to_json_dict(self) -> dict:
        out: dict = {"column": self.column}
        if self.aggregate is not None:
            out["aggregate"] = self.aggregate
        if self.scale is not None:
            out["scale"] = self.scale
        return out


@dataclass
class FilterTransform:
    column: str
    op: str  # one of FILTER_OPS
    value: Any

    kind = "filter"

    def to_json_dict(self) -> dict:
        return {"kind": "filter", "column": self.column, "op": self.op, "value": self.value}


@dataclass
class BinTransform:
    column: str
    bin_count: int = DEFAULT_BIN_COUNT

    kind = "bin"

    def to_json_dict(self) -> dict:
        return {"kind": "bin", "column": self.column, "bin_count": self.bin_count}


@dataclass
class TopKLabelTransform:
    """Label the top and bottom `fraction` of rows by a field (the y
    column when `column` is unset)."""

    fraction: float
    column: Optional[str] = None

    kind = "topk-label"

    def to_json_dict(self) -> dict:
        out: dict = {"kind": "topk-label", "fraction": self.fraction}
        if self.column is not None:
            out["column"] = self.column
        return out


Transform = Union[FilterTransform, BinTransform, TopKLabelTransform]


@dataclass
class ChartSpec:
    mark: str
    encodings: dict[str, Encoding] = field(default_factory=dict)
    transforms: list[Transform] = field(default_factory=list)
    title: str = ""
    matrix_columns: Optional[list[str]] = None  # heatmap correlation intent
    spec_version: int = SPEC_VERSION

    def copy(self) -> "ChartSpec":
        return copy.deepcopy(self)

    def to_json_dict(self) -> dict:
        out: dict = {
            "spec_version": self.spec_version,
            "mark": self.mark,
            "title": self.title,
            "encodings": {
                ch: self.encodings[ch].to_json_dict() for ch in CHANNELS if ch in self.encodings
            },
            "transforms": [t.to_json_dict() for t in self.transforms],
        }
        if self.matrix_columns is not None:
            out["matrix_columns"] = list(self.matrix_columns)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), ensure_ascii=False, sort_keys=True,
                          separators=(",", ":"))


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise MalformedSpec(message)


def _parse_encoding(channel: str, raw: Any) -> Encoding:
    _require(isinstance(raw, dict), f"encoding {channel!r} must be an object")
    column = raw.get("column")
    _require(isinstance(column, str) and column != "", f"encoding {channel!r} needs a column name")
    aggregate = raw.get("aggregate")
    if aggregate is not None:
        _require(aggregate in AGGREGATES, f"unknown aggregate {aggregate!r} on channel {channel!r}")
    scale = raw.get("scale")
    if scale is not None:
        _require(scale in SCALES, f"unknown scale {scale!r} on channel {channel!r}")
    return Encoding(column=column, aggregate=aggregate, scale=scale)


def _parse_transform(index: int, raw: Any) -> Transform:
    _require(isinstance(raw, dict), f"transform {index} must be an object")
    kind = raw.get("kind")
    if kind == "filter":
        column = raw.get("column")
        op = raw.get("op")
        _require(isinstance(column, str) and column != "", f"filter transform {index} needs a column")
        _require(isinstance(op, str), f"filter transform {index} needs an op")
        op = {"≠": "!=", "≤": "<=", "≥": ">=", "==": "="}.get(op, op)
        value = raw.get("value")
        if isinstance(value, list):
            value = tuple(value)
        return FilterTransform(column=column, op=op, value=value)
    if kind == "bin":
        column = raw.get("column")
        _require(isinstance(column, str) and column != "", f"bin transform {index} needs a column")
        bin_count = raw.get("bin_count", DEFAULT_BIN_COUNT)
        _require(isinstance(bin_count, int) and not isinstance(bin_count, bool),
                 f"bin transform {index} bin_count must be an integer")
        return BinTransform(column=column, bin_count=bin_count)
    if kind == "topk-label":
        fraction = raw.get("fraction")
        _require(isinstance(fraction, (int, float)) and not isinstance(fraction, bool),
                 f"topk-label transform {index} needs a numeric fraction")
        column = raw.get("column")
        if column is not None:
            _require(isinstance(column, str) and column != "",
                     f"topk-label transform {index} column must be a string")
        return TopKLabelTransform(fraction=float(fraction), column=column)
    raise MalformedSpec(f"unknown transform kind {kind!r} at index {index}")


def spec_from_json_dict(raw: Any) -> ChartSpec:
    """Parse a chart spec JSON object. Structure errors raise
    MalformedSpec; validation against a dataset happens separately."""
    _require(isinstance(raw, dict), "chart spec must be a JSON object")
    version = raw.get("spec_version", SPEC_VERSION)
    if version != SPEC_VERSION:
        raise UnsupportedSpecVersion(
            f"unsupported spec_version {version!r}, this build reads version {SPEC_VERSION}",
            detail={"spec_version": version},
        )
    mark = raw.get("mark")
    if mark not in MARKS:
        raise MalformedSpec(f"unknown mark {mark!r}", detail={"mark": mark})
    encodings_raw = raw.get("encodings", {})
    _require(isinstance(encodings_raw, dict), "encodings must be an object")
    encodings = {}
    for channel, enc_raw in encodings_raw.items():
        if channel not in CHANNELS:
            raise MalformedSpec(f"unknown channel {channel!r}", detail={"channel": channel})
        encodings[channel] = _parse_encoding(channel, enc_raw)
    transforms_raw = raw.get("transforms", [])
    _require(isinstance(transforms_raw, list), "transforms must be a list")
    transforms = [_parse_transform(i, t) for i, t in enumerate(transforms_raw)]
    title = raw.get("title", "")
    _require(isinstance(title, str), "title must be a string")
    matrix_columns = raw.get("matrix_columns")
    if matrix_columns is not None:
        _require(
            isinstance(matrix_columns, list) and all(isinstance(c, str) for c in matrix_columns),
            "matrix_columns must be a list of column names",
        )
    return ChartSpec(
        mark=mark,
        encodings=encodings,
        transforms=transforms,
        title=title,
        matrix_columns=matrix_columns,
    )


def spec_from_json(text: str) -> ChartSpec:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedSpec(f"invalid JSON: {exc}", detail={"position": exc.pos})
    return spec_from_json_dict(raw)
