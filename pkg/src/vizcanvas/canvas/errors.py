from __future__ import annotations

from vizcanvas.errors import VizCanvasError


class InvalidText(VizCanvasError):
    """Note text is empty."""


class UnknownNode(VizCanvasError):
    """Node id does not name a live node in this document."""


class UnknownSourceNode(VizCanvasError):
    """Provenance source is not a live node."""


class InvalidSpec(VizCanvasError):
    """Visualization payload is not a chart spec."""


class NotAVisualization(VizCanvasError):
    """Operation requires a visualization node."""


class NonPositiveSize(VizCanvasError):
    """Node sizes must be strictly positive."""


class UnsupportedVersion(VizCanvasError):
    """Document format version is not supported by this build."""


class MalformedDocument(VizCanvasError):
    """Document JSON does not match the documented format."""


class StaleVersion(VizCanvasError):
    """Mutation carried a doc_version older than the document's."""
