"""Prompt assembly.

All prompt wording lives in this one file so it can be revised without
touching the pipeline. Assembly is deterministic: identical inputs
produce byte-identical bundles.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from vizcanvas.charts.spec import ChartSpec
from vizcanvas.data.profile import DatasetSummary

SPEC_SCHEMA_DESCRIPTION = """\
A chart spec is a single JSON object:
{
  "spec_version": 1,
  "mark": "scatter" | "bar" | "line" | "histogram" | "heatmap",
  "title": "<short chart title>",
  "encodings": {
    "x":     {"column": "<column name>", "aggregate": "sum"|"mean"|"count"|"min"|"max" (optional), "scale": "linear"|"log" (optional)},
    "y":     {...same shape, required for scatter/bar/line},
    "color": {...optional},
    "size":  {...optional, quantitative columns only},
    "label": {...optional}
  },
  "transforms": [
    {"kind": "filter", "column": "<name>", "op": "="|"!="|"<"|"<="|">"|">="|"in-range", "value": <literal or [lo, hi]>},
    {"kind": "bin", "column": "<name>", "bin_count": <integer >= 1>},
    {"kind": "topk-label", "fraction": <number in (0, 0.5)>, "column": "<name>" (optional, defaults to the y column)}
  ],
  "matrix_columns": ["<name>", ...]  // heatmap only: quantitative columns for a correlation matrix
}
Rules: scatter and line need x and y; bar needs x and y with an aggregate on y;
histogram needs x only; heatmap needs matrix_columns with at least 2 quantitative columns.
Use column names exactly as listed in the dataset summary."""

SYSTEM_TEMPLATE = """\
You translate a data-analysis hypothesis into one chart specification.

{schema}

Respond with exactly one JSON object and nothing else: no prose, no code fences."""

FRESH_USER_TEMPLATE = """\
{summary}

Hypothesis: {goal}

Produce the chart spec JSON."""

REVISION_USER_TEMPLATE = """\
{summary}

Current chart spec:
{parent_spec}

Instruction: {goal}

Modify this spec according to the instruction and output the full revised spec JSON."""


@dataclass(frozen=True)
class PromptBundle:
    """System + user text for the model, plus the structured inputs so
    non-text providers (the rules provider) can skip re-parsing them."""

    system: str
    user: str
    goal: str
    summary: DatasetSummary
    parent_spec: Optional[ChartSpec] = None

    def text(self) -> str:
        return self.system + "\n\n" + self.user


def assemble_prompt(
    summary: DatasetSummary, goal: str, parent: Optional[ChartSpec] = None
) -> PromptBundle:
    system = SYSTEM_TEMPLATE.format(schema=SPEC_SCHEMA_DESCRIPTION)
    if parent is None:
        user = FRESH_USER_TEMPLATE.format(summary=summary.to_prompt_text(), goal=goal)
    else:
        user = REVISION_USER_TEMPLATE.format(
            summary=summary.to_prompt_text(), parent_spec=parent.to_json(), goal=goal
        )
    return PromptBundle(system=system, user=user, goal=goal, summary=summary, parent_spec=parent)
