"""File-backed persistence under the data directory.

Layout:
    datasets/<id>.json    ingested columnar snapshot
    documents/<id>.json   versioned canvas document
    payloads/<ref>.json   render payload per visualization node
    jobs/<id>.jsonl       append-only job transition log

Snapshot writes go through a temp file + rename so a killed process never
leaves a torn document or dataset; the job log is append-only with a
flush per line, and a torn trailing line is dropped on load.
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path
from typing import Optional

from vizcanvas.canvas.model import CanvasDocument
from vizcanvas.canvas.serialize import document_from_json_dict, document_to_json_dict
from vizcanvas.data.model import Column, ColumnType, Dataset


class Store:
    def __init__(self, data_dir: str):
        self.root = Path(data_dir)
        for sub in ("datasets", "documents", "payloads", "jobs"):
            (self.root / sub).mkdir(parents=True, exist_ok=True)
        self._io_lock = threading.Lock()

    def _write_atomic(self, path: Path, payload: dict) -> None:
        tmp = path.with_suffix(".tmp")
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, ensure_ascii=False)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)

    # -- datasets ---------------------------------------------------------

    def save_dataset(self, dataset: Dataset) -> None:
        payload = {
            "id": dataset.id,
            "name": dataset.name,
            "row_count": dataset.row_count,
            "columns": [
                {"name": c.name, "ctype": c.ctype.value, "cells": c.cells}
                for c in dataset.columns
            ],
        }
        with self._io_lock:
            self._write_atomic(self.root / "datasets" / f"{dataset.id}.json", payload)

    def load_datasets(self) -> dict[str, Dataset]:
        out = {}
        for path in sorted((self.root / "datasets").glob("*.json")):
            with open(path, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
            dataset = Dataset(
                id=raw["id"],
                name=raw["name"],
                row_count=raw["row_count"],
                columns=[
                    Column(name=c["name"], ctype=ColumnType(c["ctype"]), cells=c["cells"])
                    for c in raw["columns"]
                ],
            )
            out[dataset.id] = dataset
        return out

    # -- documents --------------------------------------------------------

    def save_document(self, doc: CanvasDocument) -> None:
        with self._io_lock:
            self._write_atomic(
                self.root / "documents" / f"{doc.id}.json", document_to_json_dict(doc)
            )

    def load_documents(self) -> dict[str, CanvasDocument]:
        out = {}
        for path in sorted((self.root / "documents").glob("*.json")):
            with open(path, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
            doc = document_from_json_dict(raw)
            out[doc.id] = doc
        return out

    # -- render payloads ----------------------------------------------------

    def save_payload(self, ref: str, payload: dict) -> None:
        with self._io_lock:
            self._write_atomic(self.root / "payloads" / f"{ref}.json", payload)

    def load_payload(self, ref: str) -> Optional[dict]:
        path = self.root / "payloads" / f"{ref}.json"
        if not path.exists():
            return None
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)

    # -- job log ------------------------------------------------------------

    def append_job_event(self, job_id: str, event: dict) -> None:
        path = self.root / "jobs" / f"{job_id}.jsonl"
        line = json.dumps(event, ensure_ascii=False)
        with self._io_lock:
            with open(path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")
                fh.flush()
                os.fsync(fh.fileno())

    def load_job_logs(self) -> dict[str, list[dict]]:
        out: dict[str, list[dict]] = {}
        for path in sorted((self.root / "jobs").glob("*.jsonl")):
            events = []
            with open(path, "r", encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        events.append(json.loads(line))
                    except json.JSONDecodeError:
                        break  # torn tail line from a crash mid-append
            if events:
                out[path.stem] = events
        return out
