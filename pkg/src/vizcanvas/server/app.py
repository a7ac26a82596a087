"""HTTP service: dataset upload, canvas documents, generation jobs.

Per-document mutations are serialized behind a lock and guarded by
optimistic doc_version checks (stale writers get 409); generation jobs
run on the bounded worker pool and append their finished visualization
to the document atomically before the job reports done.
"""

from __future__ import annotations

import json
import threading
from typing import Callable, Optional

from fastapi import FastAPI, Request, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, StreamingResponse

from vizcanvas.canvas import errors as canvas_errors
from vizcanvas.canvas import model as canvas
from vizcanvas.canvas.serialize import document_to_json_dict
from vizcanvas.charts.errors import MalformedSpec, UnsupportedSpecVersion
from vizcanvas.charts.spec import ChartSpec, spec_from_json_dict
from vizcanvas.charts.validate import validate_spec
from vizcanvas.data import errors as data_errors
from vizcanvas.data.ingest import ingest_csv
from vizcanvas.data.model import Dataset
from vizcanvas.data.profile import summarize_dataset
from vizcanvas.errors import VizCanvasError
from vizcanvas.generation import errors as generation_errors
from vizcanvas.generation.engine import EngineContext, GenerationRequest, generate
from vizcanvas.generation.providers import HttpProvider, MockProvider, RulesProvider
from vizcanvas.generation.rules import suggest_prompts
from vizcanvas.server.config import ServerConfig
from vizcanvas.server.errors import QueueFull, UnknownDocument, UnknownJob, UploadTooLarge
from vizcanvas.server.jobs import JobManager
from vizcanvas.server.persist import Store

STATUS_BY_CODE = {
    "EmptyInput": 400,
    "RaggedRows": 400,
    "DuplicateHeader": 400,
    "DecodeError": 400,
    "UnknownDataset": 404,
    "UnknownDocument": 404,
    "UnknownJob": 404,
    "UnknownNode": 404,
    "UnknownSourceNode": 404,
    "UnknownColumn": 404,
    "StaleVersion": 409,
    "UploadTooLarge": 413,
    "InvalidRequest": 422,
    "InvalidText": 422,
    "InvalidSpec": 422,
    "NotAVisualization": 422,
    "NonPositiveSize": 422,
    "MalformedSpec": 422,
    "UnsupportedSpecVersion": 422,
    "MalformedDocument": 422,
    "TypeMismatch": 422,
    "InvalidBinCount": 422,
    "NonQuantitativeColumn": 422,
    "QueueFull": 429,
}


class ServerState:
    """All mutable server state plus its persistence."""

    def __init__(self, config: ServerConfig):
        self.config = config
        self.store = Store(config.data_dir)
        self.datasets: dict[str, Dataset] = self.store.load_datasets()
        self.documents = self.store.load_documents()
        self._doc_locks: dict[str, threading.RLock] = {}
        self._locks_guard = threading.Lock()
        self.jobs = JobManager(self.store, config.max_jobs, config.max_queue)
        self.jobs.recover()
        self.engine = EngineContext(datasets=self.datasets.get)
        self.engine.providers.register(RulesProvider(self.datasets.get))
        if config.provider.mock_fixture:
            self.engine.providers.register(MockProvider(config.provider.mock_fixture))
        if config.provider.endpoint:
            self.engine.providers.register(
                HttpProvider(
                    endpoint=config.provider.endpoint,
                    model=config.provider.model,
                    api_key=config.provider.api_key,
                    timeout=config.provider.timeout_seconds,
                )
            )

    def doc_lock(self, doc_id: str) -> threading.RLock:
        with self._locks_guard:
            if doc_id not in self._doc_locks:
                self._doc_locks[doc_id] = threading.RLock()
            return self._doc_locks[doc_id]

    def document(self, doc_id: str) -> canvas.CanvasDocument:
        doc = self.documents.get(doc_id)
        if doc is None:
            raise UnknownDocument(f"no document {doc_id!r}", detail={"document_id": doc_id})
        return doc

    def dataset(self, dataset_id: str) -> Dataset:
        dataset = self.datasets.get(dataset_id)
        if dataset is None:
            raise generation_errors.UnknownDataset(
                f"no dataset {dataset_id!r}", detail={"dataset_id": dataset_id}
            )
        return dataset

    def mutate_document(self, doc_id: str, expected_version: Optional[int], fn: Callable):
        """Run a mutation with the document lock held; stale expected
        versions are rejected before the mutation runs."""
        with self.doc_lock(doc_id):
            doc = self.document(doc_id)
            if expected_version is not None and expected_version != doc.doc_version:
                raise canvas_errors.StaleVersion(
                    f"doc_version {expected_version} is stale, document is at {doc.doc_version}",
                    detail={"current": doc.doc_version, "sent": expected_version},
                )
            out = fn(doc)
            self.store.save_document(doc)
            return out

    def read_document(self, doc_id: str) -> dict:
        with self.doc_lock(doc_id):
            return document_to_json_dict(self.document(doc_id))


def _require(payload: dict, key: str):
    if key not in payload:
        raise generation_errors.InvalidRequest(f"missing field {key!r}", detail={"field": key})
    return payload[key]


def _position(payload: dict, key: str = "position") -> Optional[tuple[float, float]]:
    raw = payload.get(key)
    if raw is None:
        return None
    if not isinstance(raw, (list, tuple)) or len(raw) != 2:
        raise generation_errors.InvalidRequest(f"{key} must be a [x, y] pair")
    try:
        return float(raw[0]), float(raw[1])
    except (TypeError, ValueError):
        raise generation_errors.InvalidRequest(f"{key} must contain numbers")


def create_app(config: Optional[ServerConfig] = None) -> FastAPI:
    state = ServerState(config or ServerConfig.from_env())
    app = FastAPI(title="vizcanvas", version="0.1.0")
    app.state.ctx = state

    @app.exception_handler(VizCanvasError)
    async def handle_domain_error(_request: Request, exc: VizCanvasError):
        status = STATUS_BY_CODE.get(exc.code, 500)
        return JSONResponse(status_code=status, content=exc.to_body())

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(_request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={"code": "InvalidRequest", "message": "request body is invalid",
                     "detail": exc.errors()},
        )

    # -- datasets -----------------------------------------------------------

    @app.post("/datasets", status_code=201)
    def upload_dataset(file: UploadFile):
        raw = file.file.read(state.config.max_upload_bytes + 1)
        if len(raw) > state.config.max_upload_bytes:
            raise UploadTooLarge(
                f"upload exceeds {state.config.max_upload_bytes} bytes",
                detail={"limit": state.config.max_upload_bytes},
            )
        try:
            dataset = ingest_csv(raw, file.filename or "dataset.csv")
        except UnicodeDecodeError as exc:
            raise data_errors.EmptyInput(f"upload is not UTF-8 text: {exc}")
        state.store.save_dataset(dataset)
        state.datasets[dataset.id] = dataset
        return {"dataset_id": dataset.id, "summary": summarize_dataset(dataset).to_json_dict()}

    @app.get("/datasets/{dataset_id}")
    def get_dataset(dataset_id: str):
        return {"dataset_id": dataset_id,
                "summary": summarize_dataset(state.dataset(dataset_id)).to_json_dict()}

    @app.get("/datasets/{dataset_id}/suggestions")
    def get_suggestions(dataset_id: str, k: int = 3):
        dataset = state.dataset(dataset_id)
        if k < 1:
            raise generation_errors.InvalidRequest(f"k must be >= 1, got {k}")
        return {"suggestions": suggest_prompts(dataset, k)}

    # -- documents ------------------------------------------------------------

    @app.post("/documents", status_code=201)
    def create_document(payload: dict):
        dataset = state.dataset(_require(payload, "dataset_id"))
        doc = canvas.new_document(dataset.id)
        state.documents[doc.id] = doc
        state.store.save_document(doc)
        return state.read_document(doc.id)

    @app.get("/documents/{doc_id}")
    def get_document(doc_id: str):
        return state.read_document(doc_id)

    @app.post("/documents/{doc_id}/nodes", status_code=201)
    def create_node(doc_id: str, payload: dict):
        kind = _require(payload, "kind")
        expected = payload.get("doc_version")

        def apply(doc: canvas.CanvasDocument):
            if kind == "note":
                node_id = canvas.create_note(
                    doc, _position(payload) or (0.0, 0.0), _require(payload, "text")
                )
            elif kind == "visualization":
                try:
                    spec = spec_from_json_dict(_require(payload, "spec"))
                except (MalformedSpec, UnsupportedSpecVersion) as exc:
                    raise canvas_errors.InvalidSpec(exc.message)
                report = validate_spec(spec, state.dataset(doc.dataset_id))
                if not report.valid:
                    raise canvas_errors.InvalidSpec(
                        "spec does not validate against the dataset",
                        detail=report.to_json_dict(),
                    )
                node_id = canvas.create_visualization(
                    doc,
                    _position(payload),
                    spec,
                    source=payload.get("source"),
                    edge_kind=payload.get("edge_kind", "generated-from-note"),
                )
            else:
                raise generation_errors.InvalidRequest(f"unknown node kind {kind!r}")
            return {"node_id": node_id, "doc_version": doc.doc_version}

        return state.mutate_document(doc_id, expected, apply)

    @app.put("/documents/{doc_id}/nodes/{node_id}")
    def update_node(doc_id: str, node_id: str, payload: dict):
        expected = payload.get("doc_version")
        position = _position(payload)
        size = _position(payload, "size")
        if position is None and size is None:
            raise generation_errors.InvalidRequest("nothing to update: send position or size")

        def apply(doc: canvas.CanvasDocument):
            if position is not None:
                canvas.move_node(doc, node_id, position)
            if size is not None:
                canvas.resize_node(doc, node_id, size)
            return {"node_id": node_id, "doc_version": doc.doc_version}

        return state.mutate_document(doc_id, expected, apply)

    @app.delete("/documents/{doc_id}/nodes/{node_id}")
    def remove_node(doc_id: str, node_id: str, doc_version: Optional[int] = None):
        def apply(doc: canvas.CanvasDocument):
            canvas.delete_node(doc, node_id)
            return {"node_id": node_id, "doc_version": doc.doc_version}

        return state.mutate_document(doc_id, doc_version, apply)

    @app.post("/documents/{doc_id}/nodes/{node_id}/duplicate", status_code=201)
    def duplicate(doc_id: str, node_id: str, payload: Optional[dict] = None):
        payload = payload or {}

        def apply(doc: canvas.CanvasDocument):
            copy_id = canvas.duplicate_node(doc, node_id)
            return {
                "node_id": copy_id,
                "doc_version": doc.doc_version,
                "edge": {"from": node_id, "to": copy_id, "kind": "duplicated-from"},
            }

        return state.mutate_document(doc_id, payload.get("doc_version"), apply)

    @app.get("/documents/{doc_id}/nodes/{node_id}/lineage")
    def get_lineage(doc_id: str, node_id: str):
        with state.doc_lock(doc_id):
            return {"ancestors": canvas.lineage(state.document(doc_id), node_id)}

    @app.get("/documents/{doc_id}/nodes/{node_id}/spec")
    def get_node_spec(doc_id: str, node_id: str):
        # The spec readout stays available for tombstoned nodes so lineage
        # inspection keeps working.
        with state.doc_lock(doc_id):
            doc = state.document(doc_id)
            node = doc.nodes.get(node_id)
            if node is None or node.spec is None:
                raise canvas_errors.UnknownNode(
                    f"no visualization node {node_id!r}", detail={"node_id": node_id}
                )
            return node.spec.to_json_dict()

    @app.get("/documents/{doc_id}/nodes/{node_id}/payload")
    def get_node_payload(doc_id: str, node_id: str):
        with state.doc_lock(doc_id):
            doc = state.document(doc_id)
            node = doc.nodes.get(node_id)
            if node is None or node.payload_ref is None:
                raise canvas_errors.UnknownNode(
                    f"no rendered payload for node {node_id!r}", detail={"node_id": node_id}
                )
            ref = node.payload_ref
        payload = state.store.load_payload(ref)
        if payload is None:
            raise canvas_errors.UnknownNode(f"payload {ref!r} is missing from the store")
        return payload

    # -- generation jobs ---------------------------------------------------------

    def _run_generation(
        doc_id: str,
        dataset: Dataset,
        goal: str,
        provider: str,
        source_node: Optional[str],
        parent_node: Optional[str],
        parent_spec: Optional[ChartSpec],
    ) -> Callable:
        def run(on_stage: Callable[[str], None]) -> dict:
            request = GenerationRequest(
                dataset_id=dataset.id,
                goal_text=goal,
                parent_spec=parent_spec,
                provider=provider,
                allow_fallback=state.config.fallback_to_rules,
            )
            result = generate(request, state.engine, on_stage)

            def append(doc: canvas.CanvasDocument):
                source = parent_node or source_node
                edge_kind = "derived-from" if parent_node else "generated-from-note"
                position = None
                if parent_node is not None:
                    parent = doc.nodes.get(parent_node)
                    if parent is not None:
                        position = (
                            parent.position[0] + canvas.DUPLICATE_OFFSET[0],
                            parent.position[1] + canvas.DUPLICATE_OFFSET[1],
                        )
                if source is not None and source not in doc.nodes:
                    source = None  # source vanished mid-job; keep the chart
                node_id = canvas.create_visualization(
                    doc, position, result.spec, source=source,
                    edge_kind=edge_kind if source else "generated-from-note",
                )
                node = doc.nodes[node_id]
                node.payload_ref = node_id
                return node_id

            node_id = state.mutate_document(doc_id, None, append)
            state.store.save_payload(node_id, result.payload.to_json_dict())
            return {
                "node_id": node_id,
                "document_id": doc_id,
                "provider_used": result.provider_used,
                "attempts": result.attempts,
                "provenance_note": result.provenance_note,
            }

        return run

    @app.post("/generate", status_code=202)
    def post_generate(payload: dict):
        dataset = state.dataset(_require(payload, "dataset_id"))
        doc_id = _require(payload, "document_id")
        goal = _require(payload, "goal_text")
        if not isinstance(goal, str) or not goal.strip():
            raise generation_errors.InvalidRequest("goal_text is empty")
        provider = payload.get("provider") or state.config.default_provider
        state.engine.providers.get(provider)  # fail fast on unknown provider

        source_node = payload.get("source_node")
        parent_node = payload.get("parent_node")
        parent_spec: Optional[ChartSpec] = None
        with state.doc_lock(doc_id):
            doc = state.document(doc_id)
            for ref in (source_node, parent_node):
                if ref is not None:
                    node = doc.nodes.get(ref)
                    if node is None or node.tombstone:
                        raise canvas_errors.UnknownNode(
                            f"no live node {ref!r}", detail={"node_id": ref}
                        )
            if parent_node is not None:
                parent = doc.nodes[parent_node]
                if parent.spec is None:
                    raise canvas_errors.NotAVisualization(
                        f"node {parent_node!r} has no spec to revise"
                    )
                parent_spec = parent.spec.copy()

        job_id = state.jobs.submit(
            request_info={
                "dataset_id": dataset.id,
                "document_id": doc_id,
                "goal_text": goal,
                "provider": provider,
                "source_node": source_node,
                "parent_node": parent_node,
            },
            run=_run_generation(doc_id, dataset, goal, provider, source_node,
                                parent_node, parent_spec),
        )
        return {"job_id": job_id}

    @app.post("/documents/{doc_id}/nodes/{node_id}/revise", status_code=202)
    def post_revise(doc_id: str, node_id: str, payload: dict):
        instruction = _require(payload, "instruction")
        if not isinstance(instruction, str) or not instruction.strip():
            raise generation_errors.InvalidRequest("instruction is empty")
        with state.doc_lock(doc_id):
            doc = state.document(doc_id)
            node = doc.nodes.get(node_id)
            if node is None or node.tombstone:
                raise canvas_errors.UnknownNode(f"no live node {node_id!r}",
                                                detail={"node_id": node_id})
            if node.kind != canvas.VISUALIZATION or node.spec is None:
                raise canvas_errors.NotAVisualization(f"node {node_id!r} is a {node.kind}")
            dataset_id = doc.dataset_id
        return post_generate(
            {
                "dataset_id": dataset_id,
                "document_id": doc_id,
                "goal_text": instruction,
                "provider": payload.get("provider"),
                "parent_node": node_id,
            }
        )

    @app.get("/jobs/{job_id}")
    def get_job(job_id: str):
        return state.jobs.get(job_id).snapshot()

    @app.get("/jobs/{job_id}/events")
    def get_job_events(job_id: str):
        state.jobs.get(job_id)  # 404 before the stream starts

        def stream():
            for event in state.jobs.follow(job_id):
                yield f"event: transition\ndata: {json.dumps(event, ensure_ascii=False)}\n\n"

        return StreamingResponse(stream(), media_type="text/event-stream")

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "datasets": len(state.datasets),
                "documents": len(state.documents)}

    return app
