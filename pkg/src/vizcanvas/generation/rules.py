"""Deterministic keyword/column-matching chart generator.

Stands in for the model provider when offline, on provider failure, and
as the test oracle. Pure functions of (goal, dataset, parent): equal
inputs always produce equal specs.
"""

from __future__ import annotations

import re
from typing import Optional

from vizcanvas.charts.spec import (
    ChartSpec,
    Encoding,
    FilterTransform,
    TopKLabelTransform,
)
from vizcanvas.data.ingest import normalize_numeric
from vizcanvas.data.model import ColumnType, Dataset
from vizcanvas.data.profile import profile_column
from vizcanvas.generation.errors import NoColumnsMatched, UnrecognizedRevision

DISTRIBUTION_KEYWORDS = ("distribution", "histogram")
CORRELATION_KEYWORDS = ("correlation", "overview", "matrix")


def match_columns(goal: str, dataset: Dataset) -> list[str]:
    """Column names mentioned in the goal, in goal order.

    Case-insensitive substring matching, longest column name first; a
    match consumes its character span so "GDP" cannot re-match inside an
    already-matched "GDP per capita".
    """
    lowered = goal.lower()
    consumed: list[tuple[int, int]] = []
    hits: list[tuple[int, str]] = []
    names = dataset.column_names()
    ordered = [names[i] for i in sorted(range(len(names)), key=lambda i: (-len(names[i]), i))]
    for name in ordered:
        needle = name.lower()
        start = 0
        while True:
            pos = lowered.find(needle, start)
            if pos == -1:
                break
            end = pos + len(needle)
            if all(end <= s or pos >= e for s, e in consumed):
                consumed.append((pos, end))
                hits.append((pos, name))
                break  # first unconsumed occurrence per column is enough
            start = pos + 1
    hits.sort()
    return [name for _, name in hits]


def _quantitative_columns(dataset: Dataset) -> list[str]:
    return [c.name for c in dataset.columns if c.ctype is ColumnType.QUANTITATIVE]


def _fresh(goal: str, dataset: Dataset) -> ChartSpec:
    matches = match_columns(goal, dataset)
    types = {name: dataset.column(name).ctype for name in matches}
    quants = [m for m in matches if types[m] is ColumnType.QUANTITATIVE]
    cats = [m for m in matches if types[m] is ColumnType.CATEGORICAL]
    lowered = goal.lower()
    title = goal.strip()

    if len(quants) >= 2:
        # First mention reads as the explanatory variable, the last as
        # the outcome being asked about.
        return ChartSpec(
            mark="scatter",
            encodings={"x": Encoding(column=quants[0]), "y": Encoding(column=quants[-1])},
            title=title,
        )
    if cats and quants:
        return ChartSpec(
            mark="bar",
            encodings={
                "x": Encoding(column=cats[0]),
                "y": Encoding(column=quants[0], aggregate="mean"),
            },
            title=title,
        )
    if quants and any(k in lowered for k in DISTRIBUTION_KEYWORDS):
        return ChartSpec(
            mark="histogram", encodings={"x": Encoding(column=quants[0])}, title=title
        )
    if any(k in lowered for k in CORRELATION_KEYWORDS):
        all_quants = _quantitative_columns(dataset)
        if len(all_quants) >= 2:
            return ChartSpec(mark="heatmap", matrix_columns=all_quants, title=title)
    if quants:
        return ChartSpec(
            mark="histogram", encodings={"x": Encoding(column=quants[0])}, title=title
        )
    raise NoColumnsMatched(
        f"no dataset column mentioned in {goal!r}",
        detail={"columns": dataset.column_names()},
    )


_COLOR_BY_RE = re.compile(r"colou?r(?:ed)?\s+by\s+(.+?)\s*$", re.IGNORECASE)
_TOPK_RE = re.compile(r"top\s+and\s+bottom\s+(\d+(?:\.\d+)?)\s*%?", re.IGNORECASE)
_FILTER_RE = re.compile(r"filter\s+(.+?)\s*(<=|>=|!=|=|<|>)\s*(.+?)\s*$", re.IGNORECASE)
_AXIS_RE = re.compile(r"\b([xy])\b(?:\s*[- ]?axis)?", re.IGNORECASE)


def _resolve_text_to_column(text: str, dataset: Dataset) -> Optional[str]:
    cleaned = text.strip().strip(".?!,\"'")
    resolved = dataset.resolve_column(cleaned)
    if resolved is not None:
        return resolved
    # The mention may carry filler words ("the region"): substring match.
    lowered = cleaned.lower()
    hits = [c for c in dataset.column_names() if c.lower() in lowered]
    if hits:
        return max(hits, key=len)
    from vizcanvas.charts.validate import fuzzy_match

    return fuzzy_match(cleaned, dataset)


def _revise(instruction: str, dataset: Dataset, parent: ChartSpec) -> ChartSpec:
    revised = parent.copy()
    lowered = instruction.lower()
    applied = False

    if "swap" in lowered or "flip" in lowered:
        x, y = revised.encodings.get("x"), revised.encodings.get("y")
        if x is not None and y is not None:
            revised.encodings["x"], revised.encodings["y"] = y, x
            applied = True

    if "log" in lowered:
        axis_match = _AXIS_RE.search(instruction)
        if axis_match:
            axis = axis_match.group(1).lower()
            if axis in revised.encodings:
                revised.encodings[axis].scale = "log"
                applied = True

    color_match = _COLOR_BY_RE.search(instruction)
    if color_match:
        column = _resolve_text_to_column(color_match.group(1), dataset)
        if column is None:
            raise UnrecognizedRevision(
                f"cannot resolve {color_match.group(1)!r} to a column",
                detail={"mention": color_match.group(1)},
            )
        revised.encodings["color"] = Encoding(column=column)
        applied = True

    topk_match = _TOPK_RE.search(instruction)
    if topk_match:
        fraction = float(topk_match.group(1)) / 100.0
        revised.transforms = [
            t for t in revised.transforms if not isinstance(t, TopKLabelTransform)
        ]
        revised.transforms.append(TopKLabelTransform(fraction=fraction))
        applied = True

    filter_match = _FILTER_RE.search(instruction)
    if filter_match:
        mention, op, literal = filter_match.groups()
        column = _resolve_text_to_column(mention, dataset)
        if column is None:
            raise UnrecognizedRevision(
                f"cannot resolve {mention!r} to a column", detail={"mention": mention}
            )
        value = normalize_numeric(literal)
        revised.transforms.append(
            FilterTransform(column=column, op=op, value=value if value is not None
                            else literal.strip().strip("\"'"))
        )
        applied = True

    if not applied:
        raise UnrecognizedRevision(
            f"no revision keyword recognized in {instruction!r}",
            detail={"instruction": instruction},
        )
    return revised


def rule_based_generate(
    goal: str, dataset: Dataset, parent: Optional[ChartSpec] = None
) -> ChartSpec:
    """Generate a spec from keywords and column mentions.

    Fresh mode picks a mark from the matched column types; revision mode
    applies keyword edits ("swap"/"flip" axes, "log" on a named axis,
    "color by <col>", "top and bottom N%", "filter <col> <op> <value>")
    to a copy of the parent. The parent is never mutated.
    """
    if parent is None:
        return _fresh(goal, dataset)
    return _revise(goal, dataset, parent)


PROMPT_TEMPLATES = (
    ("relate", "How does {q0} relate to {q1}?"),
    ("distribution", "Show the distribution of {q0}"),
    ("matrix", "Show an overview with correlation matrix"),
    ("across", "How does {q0} vary across {c0}?"),
    ("common", "What are the most common values of {c0}?"),
    ("topk", "Show {q0} against {q1} with a top and bottom 10% label"),
)


def suggest_prompts(dataset: Dataset, k: int) -> list[str]:
    """Deterministic cold-start prompt suggestions.

    Templates are instantiated with the highest-variance quantitative
    columns and the highest-cardinality categorical column; returns
    min(k, applicable templates) strings.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    profiles = [profile_column(c, dataset.row_count) for c in dataset.columns]
    quants = sorted(
        (p for p in profiles if p.ctype is ColumnType.QUANTITATIVE),
        key=lambda p: -(p.stddev or 0.0) ** 2,
    )
    cats = sorted(
        (p for p in profiles if p.ctype is ColumnType.CATEGORICAL),
        key=lambda p: -p.distinct_count,
    )
    slots = {}
    if quants:
        slots["q0"] = quants[0].name
    if len(quants) >= 2:
        slots["q1"] = quants[1].name
    if cats:
        slots["c0"] = cats[0].name

    suggestions = []
    for key, template in PROMPT_TEMPLATES:
        if key in ("relate", "matrix", "topk") and len(quants) < 2:
            continue
        if key == "distribution" and not quants:
            continue
        if key == "across" and not (quants and cats):
            continue
        if key == "common" and not cats:
            continue
        suggestions.append(template.format(**slots))
        if len(suggestions) == k:
            break
    return suggestions
