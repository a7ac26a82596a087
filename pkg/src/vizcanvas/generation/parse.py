"""Tolerant extraction of a chart spec from raw model output."""

from __future__ import annotations

import json
import re

from vizcanvas.charts.errors import MalformedSpec, UnsupportedSpecVersion
from vizcanvas.charts.spec import ChartSpec, spec_from_json_dict
from vizcanvas.generation.errors import MalformedSpecJson, NoJsonFound

_FENCE_RE = re.compile(r"^```[a-zA-Z0-9_-]*\s*$", re.MULTILINE)


def extract_first_json_object(text: str) -> tuple[str, int]:
    """Return (json text, start offset) of the first balanced top-level
    JSON object, ignoring braces inside string literals."""
    start = text.find("{")
    while start != -1:
        depth = 0
        in_string = False
        escaped = False
        for i in range(start, len(text)):
            ch = text[i]
            if in_string:
                if escaped:
                    escaped = False
                elif ch == "\\":
                    escaped = True
                elif ch == '"':
                    in_string = False
                continue
            if ch == '"':
                in_string = True
            elif ch == "{":
                depth += 1
            elif ch == "}":
                depth -= 1
                if depth == 0:
                    return text[start : i + 1], start
        start = text.find("{", start + 1)
    raise NoJsonFound("no JSON object in model output")


def parse_model_output(text: str) -> ChartSpec:
    """Strip code fences and surrounding prose, pull out the first JSON
    object, and deserialize it as an unvalidated chart spec draft."""
    cleaned = _FENCE_RE.sub("", text)
    candidate, offset = extract_first_json_object(cleaned)
    try:
        raw = json.loads(candidate)
    except json.JSONDecodeError as exc:
        raise MalformedSpecJson(
            f"extracted JSON does not parse: {exc.msg}",
            detail={"position": offset + exc.pos},
        )
    try:
        return spec_from_json_dict(raw)
    except (MalformedSpec, UnsupportedSpecVersion) as exc:
        raise MalformedSpecJson(
            f"JSON is not a chart spec: {exc.message}", detail={"position": offset}
        )
