from __future__ import annotations

from vizcanvas.errors import VizCanvasError


class NoJsonFound(VizCanvasError):
    """Model output contains no JSON object."""


class MalformedSpecJson(VizCanvasError):
    """Extracted JSON is not a structurally valid chart spec."""


class NoColumnsMatched(VizCanvasError):
    """Goal text mentions no dataset column the rules can work with."""


class UnrecognizedRevision(VizCanvasError):
    """Revision instruction matches no known edit keyword."""


class ProviderTimeout(VizCanvasError):
    """Model provider did not answer within its timeout."""


class ProviderFailure(VizCanvasError):
    """Model provider call failed outright."""


class GenerationFailed(VizCanvasError):
    """All attempts, including any fallback, failed."""


class UnknownDataset(VizCanvasError):
    """Request references a dataset id that is not registered."""


class InvalidRequest(VizCanvasError):
    """Request violates a precondition (e.g. empty goal text)."""
