"""Freeform canvas document model with provenance."""

from vizcanvas.canvas.errors import (
    InvalidSpec,
    InvalidText,
    MalformedDocument,
    NonPositiveSize,
    NotAVisualization,
    StaleVersion,
    UnknownNode,
    UnknownSourceNode,
    UnsupportedVersion,
)
from vizcanvas.canvas.model import (
    DUPLICATE_OFFSET,
    EDGE_KINDS,
    LINEAGE_KINDS,
    NOTE,
    NOTE_CHART_GAP,
    VISUALIZATION,
    CanvasDocument,
    CanvasNode,
    ProvenanceEdge,
    create_note,
    create_visualization,
    delete_node,
    duplicate_node,
    lineage,
    live_nodes,
    move_node,
    new_document,
    resize_node,
)
from vizcanvas.canvas.serialize import (
    DOC_FORMAT_VERSION,
    deserialize,
    document_from_json_dict,
    document_to_json_dict,
    serialize,
)

__all__ = [
    "DOC_FORMAT_VERSION",
    "DUPLICATE_OFFSET",
    "EDGE_KINDS",
    "LINEAGE_KINDS",
    "NOTE",
    "NOTE_CHART_GAP",
    "VISUALIZATION",
    "CanvasDocument",
    "CanvasNode",
    "InvalidSpec",
    "InvalidText",
    "MalformedDocument",
    "NonPositiveSize",
    "NotAVisualization",
    "ProvenanceEdge",
    "StaleVersion",
    "UnknownNode",
    "UnknownSourceNode",
    "UnsupportedVersion",
    "create_note",
    "create_visualization",
    "delete_node",
    "deserialize",
    "document_from_json_dict",
    "document_to_json_dict",
    "duplicate_node",
    "lineage",
    "live_nodes",
    "move_node",
    "new_document",
    "resize_node",
    "serialize",
]
