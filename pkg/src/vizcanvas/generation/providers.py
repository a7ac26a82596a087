"""Model providers: live HTTP, file-backed mock, and the rules generator.

Providers are side-effect-free with respect to engine state and the
registry is read-only after startup, so any number of generation
pipelines can share them concurrently.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from abc import ABC, abstractmethod
from typing import Optional

import httpx

from vizcanvas.data.model import Dataset
from vizcanvas.generation.errors import ProviderFailure, ProviderTimeout
from vizcanvas.generation.prompts import PromptBundle
from vizcanvas.generation.rules import rule_based_generate

DEFAULT_TIMEOUT_SECONDS = 30.0


class ModelProvider(ABC):
    name: str
    timeout: float = DEFAULT_TIMEOUT_SECONDS

    @abstractmethod
    def complete(self, bundle: PromptBundle) -> str:
        """Produce raw model text for a prompt bundle."""


def prompt_key(bundle: PromptBundle) -> str:
    """Stable fixture key for a prompt: sha256 of the bundle text."""
    return hashlib.sha256(bundle.text().encode("utf-8")).hexdigest()


class RulesProvider(ModelProvider):
    """The rule-based generator exposed through the provider interface.

    Needs the dataset to match columns, so it is constructed per dataset
    registry lookup rather than per prompt.
    """

    name = "rules"

    def __init__(self, dataset_lookup):
        self._dataset_lookup = dataset_lookup  # dataset_id -> Dataset

    def complete(self, bundle: PromptBundle) -> str:
        dataset: Dataset = self._dataset_lookup(bundle.summary.dataset_id)
        spec = rule_based_generate(bundle.goal, dataset, bundle.parent_spec)
        return spec.to_json()


class MockProvider(ModelProvider):
    """Scripted responses from a JSON fixture file.

    Fixture shape: {"responses": {"<prompt sha256>": "...", "default": "..."},
    "delay_seconds": 0}. The optional delay simulates a slow model for
    progress and durability testing.
    """

    name = "mock"

    def __init__(self, fixture_path: str):
        with open(fixture_path, "r", encoding="utf-8") as fh:
            fixture = json.load(fh)
        self._responses: dict = fixture.get("responses", {})
        self._delay: float = float(fixture.get("delay_seconds", 0))

    def complete(self, bundle: PromptBundle) -> str:
        if self._delay:
            time.sleep(self._delay)
        key = prompt_key(bundle)
        if key in self._responses:
            return self._responses[key]
        if "default" in self._responses:
            return self._responses["default"]
        raise ProviderFailure(f"mock fixture has no response for prompt {key[:12]}...")


class HttpProvider(ModelProvider):
    """OpenAI-compatible chat-completions endpoint.

    Configured via environment variables (see from_env); the transport
    argument exists for tests.
    """

    name = "http"

    def __init__(
        self,
        endpoint: str,
        model: str,
        api_key: str = "",
        timeout: float = DEFAULT_TIMEOUT_SECONDS,
        transport: Optional[httpx.BaseTransport] = None,
    ):
        self.endpoint = endpoint
        self.model = model
        self.api_key = api_key
        self.timeout = timeout
        self._client = httpx.Client(timeout=timeout, transport=transport)

    @classmethod
    def from_env(cls) -> "HttpProvider":
        endpoint = os.environ.get("VIZCANVAS_PROVIDER_ENDPOINT", "")
        if not endpoint:
            raise ProviderFailure("VIZCANVAS_PROVIDER_ENDPOINT is not set")
        return cls(
            endpoint=endpoint,
            model=os.environ.get("VIZCANVAS_PROVIDER_MODEL", ""),
            api_key=os.environ.get("VIZCANVAS_PROVIDER_KEY", ""),
            timeout=float(os.environ.get("VIZCANVAS_PROVIDER_TIMEOUT", DEFAULT_TIMEOUT_SECONDS)),
        )

    def complete(self, bundle: PromptBundle) -> str:
        headers = {"content-type": "application/json"}
        if self.api_key:
            headers["authorization"] = f"Bearer {self.api_key}"
        body = {
            "model": self.model,
            "messages": [
                {"role": "system", "content": bundle.system},
                {"role": "user", "content": bundle.user},
            ],
            "temperature": 0,
        }
        try:
            response = self._client.post(self.endpoint, json=body, headers=headers)
        except httpx.TimeoutException as exc:
            raise ProviderTimeout(f"provider call timed out after {self.timeout}s") from exc
        except httpx.HTTPError as exc:
            raise ProviderFailure(f"provider call failed: {exc}") from exc
        if response.status_code != 200:
            raise ProviderFailure(
                f"provider returned HTTP {response.status_code}",
                detail={"status": response.status_code, "body": response.text[:500]},
            )
        try:
            payload = response.json()
            return payload["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise ProviderFailure(f"provider response shape unexpected: {exc}") from exc


class ProviderRegistry:
    """Name -> provider map, frozen after startup."""

    def __init__(self):
        self._providers: dict[str, ModelProvider] = {}

    def register(self, provider: ModelProvider) -> None:
        self._providers[provider.name] = provider

    def get(self, name: str) -> ModelProvider:
        if name not in self._providers:
            raise ProviderFailure(f"no provider registered under {name!r}",
                                  detail={"provider": name})
        return self._providers[name]

    def names(self) -> list[str]:
        return sorted(self._providers)
