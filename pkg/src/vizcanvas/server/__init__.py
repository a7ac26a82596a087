"""HTTP service wiring datasets, documents, and generation jobs."""

from vizcanvas.server.app import ServerState, create_app
from vizcanvas.server.config import ProviderSettings, ServerConfig
from vizcanvas.server.jobs import JOB_STATES, TERMINAL_STATES, JobManager, JobRecord
from vizcanvas.server.persist import Store

__all__ = [
    "JOB_STATES",
    "TERMINAL_STATES",
    "JobManager",
    "JobRecord",
    "ProviderSettings",
    "ServerConfig",
    "ServerState",
    "Store",
    "create_app",
]
