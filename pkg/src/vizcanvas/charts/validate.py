"""Spec validation against a dataset schema, and deterministic repair.

Validation reports every problem it can find in one pass; repair applies
every suggested fix, drops broken optional channels and transforms, and
raises Unrepairable when a required channel cannot be resolved. The
validate -> repair -> validate loop converges within three passes because
every repair action strictly removes or resolves an issue source.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from vizcanvas.charts.errors import Unrepairable
from vizcanvas.charts.spec import (
    CHANNELS,
    DEFAULT_BAR_AGGREGATE,
    OPTIONAL_CHANNELS,
    REQUIRED_CHANNELS,
    BinTransform,
    ChartSpec,
    FilterTransform,
    TopKLabelTransform,
)
from vizcanvas.data.model import FILTER_OPS, ColumnType, Dataset

FUZZY_DISTANCE_BOUND = 2


@dataclass
class Issue:
    code: str  # UnknownColumn | MissingChannel | TypeMismatch | BadTransform
    path: str  # e.g. "encodings.x.column", "transforms.0", "matrix_columns"
    message: str
    suggested_fix: Optional[str] = None

    def to_json_dict(self) -> dict:
        return {
            "code": self.code,
            "path": self.path,
            "message": self.message,
            "suggested_fix": self.suggested_fix,
        }


@dataclass
class ValidationReport:
    issues: list[Issue] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.issues

    def to_json_dict(self) -> dict:
        return {"valid": self.valid, "issues": [i.to_json_dict() for i in self.issues]}


def edit_distance(a: str, b: str) -> int:
    """Plain Levenshtein distance."""
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            current.append(min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost))
        previous = current
    return previous[-1]


def fuzzy_match(name: str, dataset: Dataset) -> Optional[str]:
    """Unique closest column within edit distance 2 (case-insensitive),
    or None when absent or ambiguous."""
    target = name.strip().lower()
    best: list[str] = []
    best_distance = FUZZY_DISTANCE_BOUND + 1
    for col in dataset.column_names():
        d = edit_distance(target, col.lower())
        if d < best_distance:
            best_distance = d
            best = [col]
        elif d == best_distance:
            best.append(col)
    if best_distance <= FUZZY_DISTANCE_BOUND and len(best) == 1:
        return best[0]
    return None


def _column_issue(name: str, path: str, dataset: Dataset) -> Optional[Issue]:
    if dataset.resolve_column(name) is not None:
        return None
    return Issue(
        code="UnknownColumn",
        path=path,
        message=f"column {name!r} does not exist in the dataset",
        suggested_fix=fuzzy_match(name, dataset),
    )


def _ctype(dataset: Dataset, name: str) -> Optional[ColumnType]:
    resolved = dataset.resolve_column(name)
    if resolved is None:
        return None
    return dataset.column(resolved).ctype


def validate_spec(spec: ChartSpec, dataset: Dataset) -> ValidationReport:
    """Check channel completeness, column existence, type compatibility,
    and transform well-formedness. Deterministic issue order."""
    issues: list[Issue] = []

    for channel in REQUIRED_CHANNELS[spec.mark]:
        if channel not in spec.encodings:
            issues.append(
                Issue(
                    code="MissingChannel",
                    path=f"encodings.{channel}",
                    message=f"mark {spec.mark!r} requires channel {channel!r}",
                )
            )

    if spec.mark == "heatmap":
        cols = spec.matrix_columns or []
        if len(cols) < 2:
            issues.append(
                Issue(
                    code="MissingChannel",
                    path="matrix_columns",
                    message="heatmap needs at least 2 matrix columns",
                )
            )
        for i, name in enumerate(cols):
            issue = _column_issue(name, f"matrix_columns.{i}", dataset)
            if issue is not None:
                issues.append(issue)
            elif _ctype(dataset, name) is not ColumnType.QUANTITATIVE:
                issues.append(
                    Issue(
                        code="TypeMismatch",
                        path=f"matrix_columns.{i}",
                        message=f"matrix column {name!r} is not quantitative",
                    )
                )

    for channel in CHANNELS:
        if channel not in spec.encodings:
            continue
        enc = spec.encodings[channel]
        path = f"encodings.{channel}"
        issue = _column_issue(enc.column, f"{path}.column", dataset)
        if issue is not None:
            issues.append(issue)
            continue
        ctype = _ctype(dataset, enc.column)
        if enc.aggregate in ("sum", "mean") and ctype is not ColumnType.QUANTITATIVE:
            issues.append(
                Issue(
                    code="TypeMismatch",
                    path=f"{path}.column",
                    message=f"aggregate {enc.aggregate!r} needs a quantitative column, "
                    f"{enc.column!r} is {ctype.value}",
                )
            )
            continue
        if enc.scale == "log" and ctype is not ColumnType.QUANTITATIVE:
            issues.append(
                Issue(
                    code="TypeMismatch",
                    path=f"{path}.scale",
                    message=f"log scale needs a quantitative column, {enc.column!r} is {ctype.value}",
                )
            )
        if spec.mark in ("scatter", "line") and channel in ("x", "y"):
            if ctype is ColumnType.CATEGORICAL:
                issues.append(
                    Issue(
                        code="TypeMismatch",
                        path=f"{path}.column",
                        message=f"{spec.mark} {channel} must be quantitative or temporal, "
                        f"{enc.column!r} is categorical",
                    )
                )
        if spec.mark == "histogram" and channel == "x" and ctype is not ColumnType.QUANTITATIVE:
            issues.append(
                Issue(
                    code="TypeMismatch",
                    path=f"{path}.column",
                    message=f"histogram x must be quantitative, {enc.column!r} is {ctype.value}",
                )
            )
        if spec.mark == "bar" and channel == "y":
            if enc.aggregate is None:
                if ctype is ColumnType.QUANTITATIVE:
                    issues.append(
                        Issue(
                            code="TypeMismatch",
                            path=f"{path}.aggregate",
                            message="bar mark needs an aggregate on y",
                            suggested_fix=DEFAULT_BAR_AGGREGATE,
                        )
                    )
                else:
                    issues.append(
                        Issue(
                            code="TypeMismatch",
                            path=f"{path}.column",
                            message=f"bar y must be quantitative, {enc.column!r} is {ctype.value}",
                        )
                    )
        if channel == "size" and ctype is not ColumnType.QUANTITATIVE:
            issues.append(
                Issue(
                    code="TypeMismatch",
                    path=f"{path}.column",
                    message=f"size channel needs a quantitative column, {enc.column!r} is {ctype.value}",
                )
            )

    for i, transform in enumerate(spec.transforms):
        path = f"transforms.{i}"
        if isinstance(transform, FilterTransform):
            if transform.op not in FILTER_OPS:
                issues.append(
                    Issue(code="BadTransform", path=path,
                          message=f"unknown filter op {transform.op!r}")
                )
                continue
            issue = _column_issue(transform.column, f"{path}.column", dataset)
            if issue is not None:
                issues.append(issue)
                continue
            ctype = _ctype(dataset, transform.column)
            if transform.op == "in-range":
                value = transform.value
                ok = (
                    isinstance(value, (list, tuple))
                    and len(value) == 2
                    and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
                )
                if not ok:
                    issues.append(
                        Issue(code="BadTransform", path=path,
                              message="in-range filter needs a [lo, hi] numeric pair")
                    )
                    continue
            if transform.op in ("<", "<=", ">", ">=", "in-range") and ctype is ColumnType.CATEGORICAL:
                issues.append(
                    Issue(
                        code="TypeMismatch",
                        path=f"{path}.column",
                        message=f"ordering filter on categorical column {transform.column!r}",
                    )
                )
        elif isinstance(transform, BinTransform):
            issue = _column_issue(transform.column, f"{path}.column", dataset)
            if issue is not None:
                issues.append(issue)
                continue
            if _ctype(dataset, transform.column) is not ColumnType.QUANTITATIVE:
                issues.append(
                    Issue(
                        code="TypeMismatch",
                        path=f"{path}.column",
                        message=f"cannot bin non-quantitative column {transform.column!r}",
                    )
                )
            elif transform.bin_count < 1:
                issues.append(
                    Issue(code="BadTransform", path=path,
                          message=f"bin count must be >= 1, got {transform.bin_count}")
                )
        elif isinstance(transform, TopKLabelTransform):
            if not 0 < transform.fraction < 0.5:
                issues.append(
                    Issue(code="BadTransform", path=path,
                          message=f"topk-label fraction must be in (0, 0.5), got {transform.fraction}")
                )
                continue
            target = transform.column
            if target is None:
                if "y" not in spec.encodings:
                    issues.append(
                        Issue(code="BadTransform", path=path,
                              message="topk-label needs a column when the spec has no y channel")
                    )
                continue
            issue = _column_issue(target, f"{path}.column", dataset)
            if issue is not None:
                issues.append(issue)
            elif _ctype(dataset, target) is not ColumnType.QUANTITATIVE:
                issues.append(
                    Issue(
                        code="TypeMismatch",
                        path=f"{path}.column",
                        message=f"topk-label column {target!r} is not quantitative",
                    )
                )

    return ValidationReport(issues=issues)


def _channel_of(path: str) -> Optional[str]:
    if path.startswith("encodings."):
        return path.split(".")[1]
    return None


def _transform_index(path: str) -> Optional[int]:
    if path.startswith("transforms."):
        return int(path.split(".")[1])
    return None


def repair_spec(spec: ChartSpec, report: ValidationReport, dataset: Dataset) -> ChartSpec:
    """Apply one deterministic repair pass; never mutates the input.

    Suggested fixes are substituted; optional channels and transforms with
    unfixable issues are dropped; a required channel that cannot be
    resolved raises Unrepairable.
    """
    repaired = spec.copy()
    drop_channels: set[str] = set()
    drop_transforms: set[int] = set()
    drop_matrix: set[int] = set()

    for issue in report.issues:
        channel = _channel_of(issue.path)
        tindex = _transform_index(issue.path)
        required = channel is not None and channel in REQUIRED_CHANNELS[spec.mark]

        if issue.path == "matrix_columns":
            raise Unrepairable("heatmap without a usable matrix column list")
        if issue.path.startswith("matrix_columns."):
            idx = int(issue.path.split(".")[1])
            if issue.suggested_fix is not None:
                repaired.matrix_columns[idx] = issue.suggested_fix  # type: ignore[index]
            else:
                drop_matrix.add(idx)
            continue

        if channel is not None:
            if channel in drop_channels:
                continue
            if issue.path.endswith(".scale") and issue.suggested_fix is None:
                repaired.encodings[channel].scale = None
                continue
            if issue.path.endswith(".aggregate") and issue.suggested_fix is not None:
                repaired.encodings[channel].aggregate = issue.suggested_fix
                continue
            if issue.suggested_fix is not None:
                repaired.encodings[channel].column = issue.suggested_fix
                continue
            if issue.code == "MissingChannel" or required:
                raise Unrepairable(
                    f"required channel {channel!r} cannot be resolved: {issue.message}",
                    detail={"path": issue.path},
                )
            drop_channels.add(channel)
            continue

        if tindex is not None:
            if tindex in drop_transforms:
                continue
            if issue.suggested_fix is not None and issue.path.endswith(".column"):
                transform = repaired.transforms[tindex]
                transform.column = issue.suggested_fix  # type: ignore[union-attr]
            else:
                drop_transforms.add(tindex)
            continue

        raise Unrepairable(f"no repair rule for issue at {issue.path}: {issue.message}")

    for channel in drop_channels:
        del repaired.encodings[channel]
    if drop_transforms:
        repaired.transforms = [
            t for i, t in enumerate(repaired.transforms) if i not in drop_transforms
        ]
    if drop_matrix:
        repaired.matrix_columns = [
            c for i, c in enumerate(repaired.matrix_columns or []) if i not in drop_matrix
        ]
        if len(repaired.matrix_columns) < 2:
            raise Unrepairable("heatmap matrix column list shrank below 2 usable columns")
    return repaired
