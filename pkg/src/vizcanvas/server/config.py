"""Server configuration from defaults, environment, and CLI flags."""

from __future__ import annotations

import os
from dataclasses import dataclass, field


@dataclass
class ProviderSettings:
    endpoint: str = ""
    model: str = ""
    api_key: str = ""
    timeout_seconds: float = 30.0
    mock_fixture: str = ""  # path to a mock-provider response file


@dataclass
class ServerConfig:
    listen: str = "127.0.0.1:8600"
    data_dir: str = "./vizcanvas-data"
    default_provider: str = "rules"
    max_jobs: int = 4
    max_queue: int = 64
    max_upload_bytes: int = 10 * 1024 * 1024
    fallback_to_rules: bool = True
    provider: ProviderSettings = field(default_factory=ProviderSettings)

    def __post_init__(self):
        if self.max_jobs < 1:
            raise ValueError("max_jobs must be >= 1")

    @classmethod
    def from_env(cls, **overrides) -> "ServerConfig":
        env = os.environ
        settings = ProviderSettings(
            endpoint=env.get("VIZCANVAS_PROVIDER_ENDPOINT", ""),
            model=env.get("VIZCANVAS_PROVIDER_MODEL", ""),
            api_key=env.get("VIZCANVAS_PROVIDER_KEY", ""),
            timeout_seconds=float(env.get("VIZCANVAS_PROVIDER_TIMEOUT", "30")),
            mock_fixture=env.get("VIZCANVAS_MOCK_FIXTURE", ""),
        )
        config = cls(
            listen=env.get("VIZCANVAS_LISTEN", "127.0.0.1:8600"),
            data_dir=env.get("VIZCANVAS_DATA_DIR", "./vizcanvas-data"),
            default_provider=env.get("VIZCANVAS_PROVIDER", "rules"),
            max_jobs=int(env.get("VIZCANVAS_MAX_JOBS", "4")),
            max_queue=int(env.get("VIZCANVAS_MAX_QUEUE", "64")),
            max_upload_bytes=int(env.get("VIZCANVAS_MAX_UPLOAD_BYTES", str(10 * 1024 * 1024))),
            fallback_to_rules=env.get("VIZCANVAS_FALLBACK", "1") not in ("0", "false", "no"),
            provider=settings,
        )
        for key, value in overrides.items():
            if value is not None:
                setattr(config, key, value)
        return config
