"""Versioned canvas document JSON.

Format version 1; deserialization rejects other versions loudly and
round-trips every field including tombstones, z-order, and edges.
"""

from __future__ import annotations

import json
from typing import Any

from vizcanvas.canvas.errors import MalformedDocument, UnsupportedVersion
from vizcanvas.canvas.model import CanvasDocument, CanvasNode, ProvenanceEdge
from vizcanvas.charts.errors import MalformedSpec, UnsupportedSpecVersion
from vizcanvas.charts.spec import spec_from_json_dict

DOC_FORMAT_VERSION = 1


def document_to_json_dict(doc: CanvasDocument) -> dict:
    nodes = {}
    for node_id, node in doc.nodes.items():
        entry: dict = {
            "id": node.id,
            "kind": node.kind,
            "position": [node.position[0], node.position[1]],
            "size": [node.size[0], node.size[1]],
            "z": node.z,
            "tombstone": node.tombstone,
        }
        if node.text is not None:
            entry["text"] = node.text
        if node.spec is not None:
            entry["spec"] = node.spec.to_json_dict()
        if node.payload_ref is not None:
            entry["payload_ref"] = node.payload_ref
        nodes[node_id] = entry
    return {
        "format_version": DOC_FORMAT_VERSION,
        "id": doc.id,
        "dataset_id": doc.dataset_id,
        "doc_version": doc.doc_version,
        "next_z": doc.next_z,
        "nodes": nodes,
        "edges": [
            {"from": e.from_id, "to": e.to_id, "kind": e.kind, "created_at": e.created_at}
            for e in doc.edges
        ],
    }


def serialize(doc: CanvasDocument) -> str:
    return json.dumps(document_to_json_dict(doc), ensure_ascii=False, sort_keys=True,
                      separators=(",", ":"))


def _pair(raw: Any, label: str) -> tuple[float, float]:
    if (
        not isinstance(raw, (list, tuple))
        or len(raw) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw)
    ):
        raise MalformedDocument(f"{label} must be a [x, y] number pair")
    return float(raw[0]), float(raw[1])


def _node_from_dict(raw: Any) -> CanvasNode:
    if not isinstance(raw, dict):
        raise MalformedDocument("node entry must be an object")
    try:
        node_id = raw["id"]
        kind = raw["kind"]
        z = raw["z"]
    except KeyError as exc:
        raise MalformedDocument(f"node entry missing key {exc}")
    if kind not in ("note", "visualization"):
        raise MalformedDocument(f"unknown node kind {kind!r}")
    if not isinstance(z, int):
        raise MalformedDocument("node z must be an integer")
    spec = None
    if raw.get("spec") is not None:
        try:
            spec = spec_from_json_dict(raw["spec"])
        except (MalformedSpec, UnsupportedSpecVersion) as exc:
            raise MalformedDocument(f"node {node_id!r} spec: {exc.message}")
    return CanvasNode(
        id=node_id,
        kind=kind,
        position=_pair(raw.get("position"), "position"),
        size=_pair(raw.get("size"), "size"),
        z=z,
        text=raw.get("text"),
        spec=spec,
        payload_ref=raw.get("payload_ref"),
        tombstone=bool(raw.get("tombstone", False)),
    )


def document_from_json_dict(raw: Any) -> CanvasDocument:
    if not isinstance(raw, dict):
        raise MalformedDocument("document must be a JSON object")
    version = raw.get("format_version")
    if version != DOC_FORMAT_VERSION:
        raise UnsupportedVersion(
            f"unsupported document format_version {version!r}",
            detail={"format_version": version},
        )
    for key in ("id", "dataset_id", "doc_version", "next_z", "nodes", "edges"):
        if key not in raw:
            raise MalformedDocument(f"document missing key {key!r}")
    if not isinstance(raw["nodes"], dict) or not isinstance(raw["edges"], list):
        raise MalformedDocument("nodes must be an object and edges a list")
    nodes = {}
    for node_id, node_raw in raw["nodes"].items():
        node = _node_from_dict(node_raw)
        if node.id != node_id:
            raise MalformedDocument(f"node key {node_id!r} does not match node id {node.id!r}")
        nodes[node_id] = node
    edges = []
    for edge_raw in raw["edges"]:
        if not isinstance(edge_raw, dict):
            raise MalformedDocument("edge entry must be an object")
        try:
            edge = ProvenanceEdge(
                from_id=edge_raw["from"],
                to_id=edge_raw["to"],
                kind=edge_raw["kind"],
                created_at=edge_raw.get("created_at", ""),
            )
        except KeyError as exc:
            raise MalformedDocument(f"edge entry missing key {exc}")
        if edge.from_id not in nodes or edge.to_id not in nodes:
            raise MalformedDocument(
                f"edge {edge.from_id!r} -> {edge.to_id!r} references a missing node"
            )
        edges.append(edge)
    return CanvasDocument(
        id=raw["id"],
        dataset_id=raw["dataset_id"],
        nodes=nodes,
        edges=edges,
        next_z=raw["next_z"],
        doc_version=raw["doc_version"],
    )


def deserialize(text: str) -> CanvasDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"invalid JSON: {exc}")
    return document_from_json_dict(raw)
