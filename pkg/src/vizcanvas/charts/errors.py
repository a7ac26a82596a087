from __future__ import annotations

from vizcanvas.errors import VizCanvasError


class MalformedSpec(VizCanvasError):
    """Chart spec JSON does not match the documented structure."""


class UnsupportedSpecVersion(VizCanvasError):
    """Chart spec carries a spec_version this build does not understand."""


class Unrepairable(VizCanvasError):
    """A required channel cannot be resolved against the dataset."""
