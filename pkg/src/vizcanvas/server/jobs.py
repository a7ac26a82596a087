"""Asynchronous generation jobs with an observable state machine.

States advance queued -> prompting -> awaiting_model -> validating ->
(repairing)* -> compiling -> done, and any state can jump to failed.
Every transition is appended to an in-memory log and the persisted job
log in the same order, so the event stream replays exactly what
happened; jobs found non-terminal after a restart are failed with a
restart marker.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

from vizcanvas.ids import new_id
from vizcanvas.server.errors import QueueFull, UnknownJob
from vizcanvas.server.persist import Store

JOB_STATES = (
    "queued",
    "prompting",
    "awaiting_model",
    "validating",
    "repairing",
    "compiling",
    "done",
    "failed",
)
TERMINAL_STATES = ("done", "failed")

RESTART_ERROR = {
    "code": "ServerRestart",
    "message": "server restarted while the job was in flight",
    "detail": {"restart": True},
}


@dataclass
class JobRecord:
    job_id: str
    request_info: dict
    transitions: list[dict] = field(default_factory=list)
    result: Optional[dict] = None
    error: Optional[dict] = None

    @property
    def state(self) -> str:
        return self.transitions[-1]["state"] if self.transitions else "queued"

    def snapshot(self) -> dict:
        return {
            "job_id": self.job_id,
            "state": self.state,
            "request": self.request_info,
            "transitions": list(self.transitions),
            "result": self.result,
            "error": self.error,
        }


class JobManager:
    """Bounded worker pool running generation jobs.

    `max_jobs` workers run in parallel; submissions beyond `max_queue`
    waiting jobs are rejected with QueueFull (HTTP 429).
    """

    def __init__(self, store: Store, max_jobs: int, max_queue: int):
        self._store = store
        self._max_queue = max_queue
        self._jobs: dict[str, JobRecord] = {}
        self._lock = threading.Lock()
        self._cond = threading.Condition(self._lock)
        self._pending: list[tuple[str, Callable[[Callable[[str], None]], dict]]] = []
        self._shutdown = False
        self._workers = [
            threading.Thread(target=self._worker_loop, name=f"job-worker-{i}", daemon=True)
            for i in range(max_jobs)
        ]
        for worker in self._workers:
            worker.start()

    # -- restart recovery ---------------------------------------------------

    def recover(self) -> None:
        """Reload persisted job logs; fail anything that was in flight."""
        for job_id, events in self._store.load_job_logs().items():
            record = JobRecord(job_id=job_id, request_info=events[0].get("request", {}))
            for event in events:
                record.transitions.append(event)
                if event["state"] == "done":
                    record.result = event.get("result")
                if event["state"] == "failed":
                    record.error = event.get("error")
            with self._lock:
                self._jobs[job_id] = record
            if record.state not in TERMINAL_STATES:
                self._transition(record, "failed", error=RESTART_ERROR)

    # -- submission -----------------------------------------------------------

    def submit(
        self,
        request_info: dict,
        run: Callable[[Callable[[str], None]], dict],
    ) -> str:
        """Enqueue a job. `run(on_stage)` executes the pipeline and returns
        the result summary dict stored on the done transition."""
        job_id = new_id("job")
        record = JobRecord(job_id=job_id, request_info=request_info)
        with self._lock:
            if self._shutdown:
                raise QueueFull("job manager is shut down")
            waiting = len(self._pending)
            if waiting >= self._max_queue:
                raise QueueFull(
                    f"generation queue is full ({waiting} waiting)",
                    detail={"max_queue": self._max_queue},
                )
            self._jobs[job_id] = record
        self._transition(record, "queued", request=request_info)
        with self._lock:
            self._pending.append((job_id, run))
            self._cond.notify()
        return job_id

    # -- execution ------------------------------------------------------------

    def _worker_loop(self) -> None:
        while True:
            with self._lock:
                while not self._pending and not self._shutdown:
                    self._cond.wait()
                if self._shutdown and not self._pending:
                    return
                job_id, run = self._pending.pop(0)
                record = self._jobs[job_id]
            try:
                result = run(lambda state: self._transition(record, state))
                self._transition(record, "done", result=result)
            except Exception as exc:  # job isolation: one failure never kills a worker
                body = exc.to_body() if hasattr(exc, "to_body") else {
                    "code": type(exc).__name__,
                    "message": str(exc),
                    "detail": None,
                }
                self._transition(record, "failed", error=body)

    def _transition(self, record: JobRecord, state: str, **extra) -> None:
        if state not in JOB_STATES:
            raise ValueError(f"unknown job state {state!r}")
        event = {"state": state, "at": time.time(), **extra}
        with self._cond:
            if "result" in extra:
                record.result = extra["result"]
            if "error" in extra:
                record.error = extra["error"]
            record.transitions.append(event)
            self._cond.notify_all()
        # Single writer per job (the owning worker), so disk order matches
        # memory order without holding the lock across the write.
        self._store.append_job_event(record.job_id, event)

    # -- observation ------------------------------------------------------------

    def get(self, job_id: str) -> JobRecord:
        with self._lock:
            if job_id not in self._jobs:
                raise UnknownJob(f"no job {job_id!r}", detail={"job_id": job_id})
            return self._jobs[job_id]

    def queued_count(self) -> int:
        with self._lock:
            return len(self._pending)

    def follow(self, job_id: str, poll_timeout: float = 0.5) -> Iterator[dict]:
        """Yield every transition in order, then return once the job is
        terminal. Replays history first, then follows live appends."""
        record = self.get(job_id)
        index = 0
        while True:
            with self._cond:
                while index >= len(record.transitions):
                    self._cond.wait(timeout=poll_timeout)
                batch = record.transitions[index:]
                index = len(record.transitions)
            for event in batch:
                yield event
                if event["state"] in TERMINAL_STATES:
                    return

    def shutdown(self) -> None:
        with self._lock:
            self._shutdown = True
            self._cond.notify_all()
