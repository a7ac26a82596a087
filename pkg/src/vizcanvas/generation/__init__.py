"""Natural-language goal to validated chart spec."""

from vizcanvas.generation.engine import (
    DEFAULT_MAX_REPAIR_ATTEMPTS,
    EngineContext,
    GenerationRequest,
    GenerationResult,
    generate,
    revise,
)
from vizcanvas.generation.errors import (
    GenerationFailed,
    InvalidRequest,
    MalformedSpecJson,
    NoColumnsMatched,
    NoJsonFound,
    ProviderFailure,
    ProviderTimeout,
    UnknownDataset,
    UnrecognizedRevision,
)
from vizcanvas.generation.parse import extract_first_json_object, parse_model_output
from vizcanvas.generation.prompts import PromptBundle, assemble_prompt
from vizcanvas.generation.providers import (
    HttpProvider,
    MockProvider,
    ModelProvider,
    ProviderRegistry,
    RulesProvider,
    prompt_key,
)
from vizcanvas.generation.rules import match_columns, rule_based_generate, suggest_prompts

__all__ = [
    "DEFAULT_MAX_REPAIR_ATTEMPTS",
    "EngineContext",
    "GenerationFailed",
    "GenerationRequest",
    "GenerationResult",
    "HttpProvider",
    "InvalidRequest",
    "MalformedSpecJson",
    "MockProvider",
    "ModelProvider",
    "NoColumnsMatched",
    "NoJsonFound",
    "PromptBundle",
    "ProviderFailure",
    "ProviderRegistry",
    "ProviderTimeout",
    "RulesProvider",
    "UnknownDataset",
    "UnrecognizedRevision",
    "assemble_prompt",
    "extract_first_json_object",
    "generate",
    "match_columns",
    "parse_model_output",
    "prompt_key",
    "revise",
    "rule_based_generate",
    "suggest_prompts",
]
