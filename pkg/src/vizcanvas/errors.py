"""Shared error base class.

Every domain error carries a stable ``code`` (the class name) and an
optional ``detail`` payload so the HTTP layer can serialize errors
uniformly as ``{code, message, detail}``.
"""

from __future__ import annotations

from typing import Any


class VizCanvasError(Exception):
    """Base class for all domain errors."""

    def __init__(self, message: str, detail: Any = None):
        super().__init__(message)
        self.message = message
        self.detail = detail

    @property
    def code(self) -> str:
        return type(self).__name__

    def to_body(self) -> dict:
        return {"code": self.code, "message": self.message, "detail": self.detail}
