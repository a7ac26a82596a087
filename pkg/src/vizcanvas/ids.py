"""Sortable unique identifiers.

IDs are fixed-width so lexicographic order equals creation order:
millisecond timestamp, a process-wide sequence number, and a random
suffix to keep IDs unique across processes sharing a data directory.
"""

from __future__ import annotations

import secrets
import threading
import time

_lock = threading.Lock()
_seq = 0


def new_id(prefix: str) -> str:
    global _seq
    with _lock:
        _seq = (_seq + 1) % 1_000_000
        seq = _seq
    ms = int(time.time() * 1000)
    return f"{prefix}-{ms:013d}-{seq:06d}-{secrets.token_hex(3)}"
