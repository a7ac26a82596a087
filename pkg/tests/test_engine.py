import json
import random

import pytest

from conftest import ANALYSIS_QUESTION
from vizcanvas.charts.validate import validate_spec
from vizcanvas.generation import (
    EngineContext,
    GenerationFailed,
    GenerationRequest,
    InvalidRequest,
    MockProvider,
    ModelProvider,
    ProviderTimeout,
    RulesProvider,
    UnknownDataset,
    assemble_prompt,
    generate,
    prompt_key,
    revise,
    rule_based_generate,
)
from vizcanvas.generation.errors import ProviderFailure


class ScriptedProvider(ModelProvider):
    """Returns queued responses; raising entries are raised instead."""

    name = "scripted"

    def __init__(self, responses):
        self.responses = list(responses)
        self.calls = 0

    def complete(self, bundle):
        self.calls += 1
        response = self.responses.pop(0) if self.responses else ""
        if isinstance(response, Exception):
            raise response
        return response


@pytest.fixture()
def ctx(country_dataset):
    datasets = {country_dataset.id: country_dataset}
    context = EngineContext(datasets=datasets.get)
    context.providers.register(RulesProvider(datasets.get))
    return context


def request_for(dataset, provider="rules", **kwargs):
    return GenerationRequest(dataset_id=dataset.id, goal_text=ANALYSIS_QUESTION,
                             provider=provider, **kwargs)


class TestGenerate:
    def test_rules_provider_matches_rule_output(self, ctx, country_dataset):
        result = generate(request_for(country_dataset), ctx)
        expected = rule_based_generate(ANALYSIS_QUESTION, country_dataset)
        assert result.spec.to_json() == expected.to_json()
        assert result.attempts == 1
        assert result.provider_used == "rules"
        assert result.provenance_note == "fresh"

    def test_misspelled_column_repaired(self, ctx, country_dataset):
        bad = json.dumps({
            "mark": "scatter",
            "encodings": {"x": {"column": "GDP per capita"},
                          "y": {"column": "Birth Rte"}},
        })
        ctx.providers.register(ScriptedProvider([bad]))
        result = generate(request_for(country_dataset, provider="scripted"), ctx)
        assert result.spec.encodings["y"].column == "Birth Rate"
        assert result.attempts == 2
        assert result.provider_used == "scripted"

    def test_prose_falls_back_to_rules(self, ctx, country_dataset):
        ctx.providers.register(ScriptedProvider(["I cannot help with that."]))
        result = generate(request_for(country_dataset, provider="scripted"), ctx)
        assert result.provider_used == "rules"
        assert validate_spec(result.spec, ctx.datasets(country_dataset.id)).valid

    def test_fallback_disabled_raises(self, ctx, country_dataset):
        ctx.providers.register(ScriptedProvider(["no json here"]))
        with pytest.raises(GenerationFailed):
            generate(request_for(country_dataset, provider="scripted",
                                 allow_fallback=False), ctx)

    def test_provider_timeout_propagates_without_fallback(self, ctx, country_dataset):
        ctx.providers.register(ScriptedProvider([ProviderTimeout("too slow")]))
        with pytest.raises(ProviderTimeout):
            generate(request_for(country_dataset, provider="scripted",
                                 allow_fallback=False), ctx)

    def test_provider_timeout_falls_back(self, ctx, country_dataset):
        ctx.providers.register(ScriptedProvider([ProviderTimeout("too slow")]))
        result = generate(request_for(country_dataset, provider="scripted"), ctx)
        assert result.provider_used == "rules"

    def test_empty_goal(self, ctx, country_dataset):
        request = request_for(country_dataset)
        request.goal_text = "   "
        with pytest.raises(InvalidRequest):
            generate(request, ctx)

    def test_unknown_dataset(self, ctx, country_dataset):
        request = request_for(country_dataset)
        request.dataset_id = "nope"
        with pytest.raises(UnknownDataset):
            generate(request, ctx)

    def test_stage_order(self, ctx, country_dataset):
        stages = []
        generate(request_for(country_dataset), ctx, stages.append)
        assert stages == ["prompting", "awaiting_model", "validating", "compiling"]

    def test_stage_order_with_repair(self, ctx, country_dataset):
        bad = json.dumps({
            "mark": "scatter",
            "encodings": {"x": {"column": "GDP per capita"},
                          "y": {"column": "Birth Rte"}},
        })
        ctx.providers.register(ScriptedProvider([bad]))
        stages = []
        generate(request_for(country_dataset, provider="scripted"), ctx, stages.append)
        assert stages == ["prompting", "awaiting_model", "validating", "repairing",
                          "compiling"]


class TestRevise:
    def test_flip_through_pipeline(self, ctx, country_dataset):
        parent = rule_based_generate(ANALYSIS_QUESTION, country_dataset)
        before = parent.to_json()
        result = revise(parent, "flip it", request_for(country_dataset), ctx)
        assert result.provenance_note == "revised-from-parent"
        assert result.spec.encodings["x"].column == "Birth Rate"
        assert parent.to_json() == before

    def test_log_scale_revision(self, ctx, country_dataset):
        parent = rule_based_generate(ANALYSIS_QUESTION, country_dataset)
        result = revise(parent, "use log scale on x", request_for(country_dataset), ctx)
        assert result.spec.encodings["x"].scale == "log"

    def test_empty_instruction(self, ctx, country_dataset):
        parent = rule_based_generate(ANALYSIS_QUESTION, country_dataset)
        with pytest.raises(InvalidRequest):
            revise(parent, "", request_for(country_dataset), ctx)


def misspell(rng, name):
    ops = rng.randint(1, 2)
    out = name
    for _ in range(ops):
        if len(out) < 2:
            break
        i = rng.randrange(len(out))
        choice = rng.random()
        if choice < 0.4:
            out = out[:i] + out[i + 1 :]  # drop
        elif choice < 0.8:
            out = out[:i] + rng.choice("abcdefgh") + out[i + 1 :]  # replace
        else:
            out = out[:i] + rng.choice("abcdefgh") + out[i:]  # insert
    return out


def adversarial_output(rng, dataset):
    """One of the failure classes flaky model providers produce."""
    kind = rng.choice(["misspelled", "missing_channel", "fenced", "prose_wrapped",
                       "pure_prose"])
    x = rng.choice(["GDP per capita", "Birth Rate", "Minimum wage", "Life expectancy"])
    y = rng.choice(["Fertility Rate", "Infant mortality", "Unemployment rate"])
    spec = {
        "mark": "scatter",
        "encodings": {"x": {"column": x}, "y": {"column": y}},
    }
    if kind == "misspelled":
        spec["encodings"]["x"]["column"] = misspell(rng, x)
        return json.dumps(spec)
    if kind == "missing_channel":
        del spec["encodings"]["y"]
        return json.dumps(spec)
    if kind == "fenced":
        return f"```json\n{json.dumps(spec)}\n```"
    if kind == "prose_wrapped":
        return f"Sure thing! Here you go: {json.dumps(spec)} Let me know how it looks."
    return "I'm sorry, I am unable to produce a chart for that request."


class TestAdversarialProviders:
    def test_every_output_terminates_cleanly(self, ctx, country_dataset):
        rng = random.Random(424242)
        for i in range(100):
            ctx.providers.register(
                ScriptedProvider([adversarial_output(rng, country_dataset)])
            )
            request = request_for(country_dataset, provider="scripted")
            try:
                result = generate(request, ctx)
            except GenerationFailed:
                continue
            assert result.attempts <= request.max_repair_attempts + 1
            assert validate_spec(result.spec, country_dataset).valid


class TestHttpProvider:
    def make_provider(self, handler, **kwargs):
        import httpx

        from vizcanvas.generation import HttpProvider

        return HttpProvider(
            endpoint="http://model.test/v1/chat/completions",
            model="test-model",
            api_key="secret",
            transport=httpx.MockTransport(handler),
            **kwargs,
        )

    def test_sends_chat_payload_and_reads_content(self, country_dataset):
        import httpx

        from vizcanvas.data import summarize_dataset

        seen = {}

        def handler(request):
            seen["body"] = json.loads(request.content)
            seen["auth"] = request.headers.get("authorization")
            return httpx.Response(
                200,
                json={"choices": [{"message": {"content": "{\"mark\": \"histogram\"}"}}]},
            )

        provider = self.make_provider(handler)
        bundle = assemble_prompt(summarize_dataset(country_dataset), "a goal")
        assert provider.complete(bundle) == '{"mark": "histogram"}'
        assert seen["auth"] == "Bearer secret"
        assert seen["body"]["model"] == "test-model"
        assert seen["body"]["messages"][1]["content"] == bundle.user

    def test_non_200_is_provider_failure(self, country_dataset):
        import httpx

        from vizcanvas.data import summarize_dataset

        provider = self.make_provider(lambda request: httpx.Response(503, text="down"))
        bundle = assemble_prompt(summarize_dataset(country_dataset), "x")
        with pytest.raises(ProviderFailure):
            provider.complete(bundle)

    def test_timeout_maps_to_provider_timeout(self, country_dataset):
        import httpx

        from vizcanvas.data import summarize_dataset

        def handler(request):
            raise httpx.ReadTimeout("slow", request=request)

        provider = self.make_provider(handler)
        bundle = assemble_prompt(summarize_dataset(country_dataset), "x")
        with pytest.raises(ProviderTimeout):
            provider.complete(bundle)


class TestMockProvider:
    def test_fixture_lookup_and_default(self, ctx, country_dataset, tmp_path):
        from vizcanvas.data import summarize_dataset

        summary = summarize_dataset(country_dataset)
        bundle = assemble_prompt(summary, "mock goal")
        fixture = {
            "responses": {
                prompt_key(bundle): json.dumps({
                    "mark": "histogram",
                    "encodings": {"x": {"column": "Birth Rate"}},
                }),
                "default": "no json",
            }
        }
        path = tmp_path / "mock.json"
        path.write_text(json.dumps(fixture))
        provider = MockProvider(str(path))
        assert "histogram" in provider.complete(bundle)
        other = assemble_prompt(summary, "different goal")
        assert provider.complete(other) == "no json"

    def test_missing_key_without_default(self, country_dataset, tmp_path):
        path = tmp_path / "mock.json"
        path.write_text(json.dumps({"responses": {}}))
        provider = MockProvider(str(path))
        from vizcanvas.data import summarize_dataset

        bundle = assemble_prompt(summarize_dataset(country_dataset), "x")
        with pytest.raises(ProviderFailure):
            provider.complete(bundle)
