from __future__ import annotations

from vizcanvas.errors import VizCanvasError


class UnknownDocument(VizCanvasError):
    """Document id is not registered."""


class UnknownJob(VizCanvasError):
    """Job id is not registered."""


class QueueFull(VizCanvasError):
    """Generation queue exceeded its configured bound."""


class UploadTooLarge(VizCanvasError):
    """Dataset upload exceeds the configured size limit."""
