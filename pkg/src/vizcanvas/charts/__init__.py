"""Chart specification: schema, validation, repair, and compilation."""

from vizcanvas.charts.compile import (
    LABEL_FIELD,
    RenderPayload,
    compile_spec,
    resolve_spec_columns,
    spec_to_query,
)
from vizcanvas.charts.errors import MalformedSpec, Unrepairable, UnsupportedSpecVersion
from vizcanvas.charts.spec import (
    CHANNELS,
    DEFAULT_BAR_AGGREGATE,
    DEFAULT_BIN_COUNT,
    MARKS,
    SPEC_VERSION,
    BinTransform,
    ChartSpec,
    Encoding,
    FilterTransform,
    TopKLabelTransform,
    spec_from_json,
    spec_from_json_dict,
)
from vizcanvas.charts.validate import (
    Issue,
    ValidationReport,
    edit_distance,
    fuzzy_match,
    repair_spec,
    validate_spec,
)

__all__ = [
    "CHANNELS",
    "DEFAULT_BAR_AGGREGATE",
    "DEFAULT_BIN_COUNT",
    "LABEL_FIELD",
    "MARKS",
    "SPEC_VERSION",
    "BinTransform",
    "ChartSpec",
    "Encoding",
    "FilterTransform",
    "Issue",
    "MalformedSpec",
    "RenderPayload",
    "TopKLabelTransform",
    "Unrepairable",
    "UnsupportedSpecVersion",
    "ValidationReport",
    "compile_spec",
    "edit_distance",
    "fuzzy_match",
    "repair_spec",
    "resolve_spec_columns",
    "spec_from_json",
    "spec_from_json_dict",
    "spec_to_query",
    "validate_spec",
]
