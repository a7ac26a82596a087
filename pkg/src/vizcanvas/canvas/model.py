"""Freeform canvas document: notes, visualizations, and provenance.

Deletion tombstones a node instead of removing it so lineage chains
survive; provenance edges of kind derived-from / duplicated-from form a
forest (at most one parent per node, no cycles), which makes lineage
walks terminate. Canvas units are abstract floats; the UI maps them to
pixels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Optional

from vizcanvas.canvas.errors import (
    InvalidSpec,
    InvalidText,
    NonPositiveSize,
    NotAVisualization,
    UnknownNode,
    UnknownSourceNode,
)
from vizcanvas.charts.spec import ChartSpec
from vizcanvas.ids import new_id

NOTE = "note"
VISUALIZATION = "visualization"

EDGE_KINDS = ("derived-from", "duplicated-from", "generated-from-note")
LINEAGE_KINDS = ("derived-from", "duplicated-from")

DEFAULT_NOTE_SIZE = (240.0, 80.0)
DEFAULT_VIZ_SIZE = (360.0, 300.0)
NOTE_CHART_GAP = 16.0
DUPLICATE_OFFSET = (24.0, 24.0)


def _now_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass
class CanvasNode:
    id: str
    kind: str  # note | visualization
    position: tuple[float, float]
    size: tuple[float, float]
    z: int
    text: Optional[str] = None  # note payload
    spec: Optional[ChartSpec] = None  # visualization payload
    payload_ref: Optional[str] = None  # cached render payload reference
    tombstone: bool = False


@dataclass
class ProvenanceEdge:
    from_id: str
    to_id: str
    kind: str  # one of EDGE_KINDS
    created_at: str = field(default_factory=_now_iso)


@dataclass
class CanvasDocument:
    id: str
    dataset_id: str
    nodes: dict[str, CanvasNode] = field(default_factory=dict)
    edges: list[ProvenanceEdge] = field(default_factory=list)
    next_z: int = 0
    doc_version: int = 0


def new_document(dataset_id: str) -> CanvasDocument:
    return CanvasDocument(id=new_id("doc"), dataset_id=dataset_id)


def _live(doc: CanvasDocument, node_id: str) -> CanvasNode:
    node = doc.nodes.get(node_id)
    if node is None or node.tombstone:
        raise UnknownNode(f"no live node {node_id!r}", detail={"node_id": node_id})
    return node


def _take_z(doc: CanvasDocument) -> int:
    z = doc.next_z
    doc.next_z += 1
    return z


def _parent_edge(doc: CanvasDocument, node_id: str) -> Optional[ProvenanceEdge]:
    for edge in doc.edges:
        if edge.to_id == node_id and edge.kind in LINEAGE_KINDS:
            return edge
    return None


def _append_edge(doc: CanvasDocument, from_id: str, to_id: str, kind: str) -> None:
    if kind not in EDGE_KINDS:
        raise ValueError(f"unknown edge kind {kind!r}")
    if from_id == to_id:
        raise ValueError("provenance edge endpoints must differ")
    if any(e.to_id == to_id for e in doc.edges):
        raise ValueError(f"node {to_id!r} already has a provenance parent")
    doc.edges.append(ProvenanceEdge(from_id=from_id, to_id=to_id, kind=kind))


def create_note(doc: CanvasDocument, position: tuple[float, float], text: str) -> str:
    if not text.strip():
        raise InvalidText("note text is empty")
    node = CanvasNode(
        id=new_id("node"),
        kind=NOTE,
        position=(float(position[0]), float(position[1])),
        size=DEFAULT_NOTE_SIZE,
        z=_take_z(doc),
        text=text,
    )
    doc.nodes[node.id] = node
    doc.doc_version += 1
    return node.id


def create_visualization(
    doc: CanvasDocument,
    position: Optional[tuple[float, float]],
    spec: ChartSpec,
    source: Optional[str] = None,
    edge_kind: str = "generated-from-note",
    payload_ref: Optional[str] = None,
) -> str:
    """Add a visualization node; when a source node is given, record the
    provenance edge. With no explicit position the chart lands directly
    below its source (the button-below-instruction flow), or at the
    origin without a source."""
    if not isinstance(spec, ChartSpec):
        raise InvalidSpec("visualization payload must be a chart spec")
    source_node = None
    if source is not None:
        source_node = doc.nodes.get(source)
        if source_node is None or source_node.tombstone:
            raise UnknownSourceNode(f"no live source node {source!r}", detail={"node_id": source})
    if position is None:
        if source_node is not None:
            position = (
                source_node.position[0],
                source_node.position[1] + source_node.size[1] + NOTE_CHART_GAP,
            )
        else:
            position = (0.0, 0.0)
    node = CanvasNode(
        id=new_id("node"),
        kind=VISUALIZATION,
        position=(float(position[0]), float(position[1])),
        size=DEFAULT_VIZ_SIZE,
        z=_take_z(doc),
        spec=spec,
        payload_ref=payload_ref,
    )
    doc.nodes[node.id] = node
    if source_node is not None:
        _append_edge(doc, source_node.id, node.id, edge_kind)
    doc.doc_version += 1
    return node.id


def move_node(doc: CanvasDocument, node_id: str, position: tuple[float, float]) -> int:
    """Move a node and raise it to the top of the z-order (drag
    expectation). Returns the new doc_version."""
    node = _live(doc, node_id)
    node.position = (float(position[0]), float(position[1]))
    node.z = _take_z(doc)
    doc.doc_version += 1
    return doc.doc_version


def resize_node(doc: CanvasDocument, node_id: str, size: tuple[float, float]) -> int:
    node = _live(doc, node_id)
    w, h = float(size[0]), float(size[1])
    if w <= 0 or h <= 0:
        raise NonPositiveSize(f"size must be positive, got {(w, h)}")
    node.size = (w, h)
    doc.doc_version += 1
    return doc.doc_version


def duplicate_node(doc: CanvasDocument, node_id: str) -> str:
    """Copy a visualization with an offset and a duplicated-from edge.

    The copy's spec is independent: revising either node never changes
    the other."""
    node = _live(doc, node_id)
    if node.kind != VISUALIZATION:
        raise NotAVisualization(f"node {node_id!r} is a {node.kind}")
    copy = CanvasNode(
        id=new_id("node"),
        kind=VISUALIZATION,
        position=(node.position[0] + DUPLICATE_OFFSET[0], node.position[1] + DUPLICATE_OFFSET[1]),
        size=node.size,
        z=_take_z(doc),
        spec=node.spec.copy() if node.spec is not None else None,
        payload_ref=node.payload_ref,
    )
    doc.nodes[copy.id] = copy
    _append_edge(doc, node.id, copy.id, "duplicated-from")
    doc.doc_version += 1
    return copy.id


def delete_node(doc: CanvasDocument, node_id: str) -> int:
    """Tombstone a node: payload retained, excluded from rendering and
    z allocation; provenance edges stay valid."""
    node = _live(doc, node_id)
    node.tombstone = True
    doc.doc_version += 1
    return doc.doc_version


def lineage(doc: CanvasDocument, node_id: str) -> list[str]:
    """Ancestor chain, nearest parent first, following derived-from and
    duplicated-from edges; tombstoned ancestors are still listed."""
    if node_id not in doc.nodes:
        raise UnknownNode(f"no node {node_id!r}", detail={"node_id": node_id})
    chain: list[str] = []
    current = node_id
    while True:
        edge = _parent_edge(doc, current)
        if edge is None:
            return chain
        chain.append(edge.from_id)
        current = edge.from_id


def live_nodes(doc: CanvasDocument) -> list[CanvasNode]:
    return [n for n in doc.nodes.values() if not n.tombstone]
