from __future__ import annotations

from vizcanvas.errors import VizCanvasError


class EmptyInput(VizCanvasError):
    """CSV stream contains no header row."""


class RaggedRows(VizCanvasError):
    """A data row has a different field count than the header."""


class DuplicateHeader(VizCanvasError):
    """Two header cells collide after trimming surrounding whitespace."""


class UnknownColumn(VizCanvasError):
    """A referenced column does not exist in the dataset."""


class TypeMismatch(VizCanvasError):
    """Operation requires a different column type (e.g. numeric comparison on categorical)."""


class InvalidBinCount(VizCanvasError):
    """Bin count below 1."""


class NonQuantitativeColumn(VizCanvasError):
    """Correlation requested over a non-quantitative column."""


class FieldNotNumeric(VizCanvasError):
    """Quantile labeling requires a numeric field."""


class EmptyTable(VizCanvasError):
    """Quantile labeling requires a non-empty table."""
