"""The generation pipeline: prompt, complete, parse, validate, repair, compile.

On provider failure or exhausted repairs the pipeline falls back to the
rules provider (when the request allows it) so sporadic model failures
still yield a chart; the result records which provider actually answered.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from vizcanvas.charts.compile import RenderPayload, compile_spec
from vizcanvas.charts.errors import MalformedSpec, Unrepairable, UnsupportedSpecVersion
from vizcanvas.charts.spec import ChartSpec
from vizcanvas.charts.validate import repair_spec, validate_spec
from vizcanvas.data.model import Dataset
from vizcanvas.data.profile import summarize_dataset
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
from vizcanvas.generation.parse import parse_model_output
from vizcanvas.generation.prompts import assemble_prompt
from vizcanvas.generation.providers import ModelProvider, ProviderRegistry

DEFAULT_MAX_REPAIR_ATTEMPTS = 3

StageCallback = Callable[[str], None]

_PIPELINE_ERRORS = (
    ProviderTimeout,
    ProviderFailure,
    NoJsonFound,
    MalformedSpecJson,
    MalformedSpec,
    UnsupportedSpecVersion,
    Unrepairable,
    NoColumnsMatched,
    UnrecognizedRevision,
)


@dataclass
class GenerationRequest:
    dataset_id: str
    goal_text: str
    parent_spec: Optional[ChartSpec] = None  # present iff revision
    provider: str = "rules"
    max_repair_attempts: int = DEFAULT_MAX_REPAIR_ATTEMPTS
    allow_fallback: bool = True


@dataclass
class GenerationResult:
    spec: ChartSpec
    payload: RenderPayload
    provenance_note: str  # "fresh" | "revised-from-parent"
    attempts: int
    provider_used: str


@dataclass
class EngineContext:
    datasets: Callable[[str], Optional[Dataset]]
    providers: ProviderRegistry = field(default_factory=ProviderRegistry)


def _run_leg(
    provider: ModelProvider,
    dataset: Dataset,
    request: GenerationRequest,
    on_stage: StageCallback,
) -> tuple[ChartSpec, RenderPayload, int]:
    """One pipeline leg with a single provider. Raises pipeline errors."""
    on_stage("prompting")
    summary = summarize_dataset(dataset)
    bundle = assemble_prompt(summary, request.goal_text, request.parent_spec)

    on_stage("awaiting_model")
    text = provider.complete(bundle)

    on_stage("validating")
    draft = parse_model_output(text)
    report = validate_spec(draft, dataset)
    attempts = 1
    repairs = 0
    while not report.valid and repairs < request.max_repair_attempts:
        on_stage("repairing")
        draft = repair_spec(draft, report, dataset)
        report = validate_spec(draft, dataset)
        attempts += 1
        repairs += 1
    if not report.valid:
        raise Unrepairable(
            f"spec still invalid after {repairs} repair passes",
            detail=report.to_json_dict(),
        )

    on_stage("compiling")
    payload = compile_spec(draft, dataset)
    return payload.spec, payload, attempts


def generate(
    request: GenerationRequest,
    ctx: EngineContext,
    on_stage: Optional[StageCallback] = None,
) -> GenerationResult:
    """Run the full pipeline for a fresh goal or a revision.

    Raises InvalidRequest, UnknownDataset, ProviderTimeout (when fallback
    is off), or GenerationFailed when every leg failed.
    """
    stage: StageCallback = on_stage or (lambda _name: None)
    if not request.goal_text.strip():
        raise InvalidRequest("goal text is empty")
    dataset = ctx.datasets(request.dataset_id)
    if dataset is None:
        raise UnknownDataset(
            f"no dataset {request.dataset_id!r}", detail={"dataset_id": request.dataset_id}
        )
    provider = ctx.providers.get(request.provider)

    try:
        spec, payload, attempts = _run_leg(provider, dataset, request, stage)
        note = "fresh" if request.parent_spec is None else "revised-from-parent"
        return GenerationResult(
            spec=spec,
            payload=payload,
            provenance_note=note,
            attempts=attempts,
            provider_used=provider.name,
        )
    except _PIPELINE_ERRORS as primary_error:
        if not request.allow_fallback or provider.name == "rules":
            if isinstance(primary_error, ProviderTimeout):
                raise
            raise GenerationFailed(
                f"generation failed: {primary_error.message}",
                detail={"primary": primary_error.to_body()},
            ) from primary_error
        rules = ctx.providers.get("rules")
        try:
            spec, payload, attempts = _run_leg(rules, dataset, request, stage)
        except _PIPELINE_ERRORS as fallback_error:
            raise GenerationFailed(
                "generation and rules fallback both failed",
                detail={
                    "primary": primary_error.to_body(),
                    "fallback": fallback_error.to_body(),
                },
            ) from fallback_error
        note = "fresh" if request.parent_spec is None else "revised-from-parent"
        return GenerationResult(
            spec=spec,
            payload=payload,
            provenance_note=note,
            attempts=attempts,
            provider_used=rules.name,
        )


def revise(
    node_spec: ChartSpec,
    instruction: str,
    request: GenerationRequest,
    ctx: EngineContext,
    on_stage: Optional[StageCallback] = None,
) -> GenerationResult:
    """Revision entry point: same pipeline with the parent spec attached.

    The parent spec object is never mutated.
    """
    if not instruction.strip():
        raise InvalidRequest("revision instruction is empty")
    revision = GenerationRequest(
        dataset_id=request.dataset_id,
        goal_text=instruction,
        parent_spec=node_spec,
        provider=request.provider,
        max_repair_attempts=request.max_repair_attempts,
        allow_fallback=request.allow_fallback,
    )
    return generate(revision, ctx, on_stage)
