"""Pipeline configuration: one JSON file, overridable via ATLAS_* env vars.

Precedence is defaults < config file < environment < CLI flags.  Environment
variables use the section and key joined by underscores, uppercased, e.g.
``ATLAS_PROVIDER_MODE=replay`` or ``ATLAS_GRAPH_THRESHOLD=3``.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Mapping

from .corpus import DEFAULT_PUB_TYPES, DEFAULT_SOURCE_PRIORITY


@dataclass
class SourcesConfig:
    priority: list[str] = field(default_factory=lambda: list(DEFAULT_SOURCE_PRIORITY))
    allowed_pub_types: dict[str, list[str]] = field(
        default_factory=lambda: {k: list(v) for k, v in DEFAULT_PUB_TYPES.items()}
    )
    require_abstract: bool = True
    query_terms: list[str] = field(default_factory=lambda: ["human-ai interaction"])


@dataclass
class ProviderConfig:
    mode: str = "replay"  # replay | record | live
    extraction_model: str = "claude-opus-4-1-20250805"
    embedding_model: str = "qwen3-embedding-8b"
    naming_model: str = "claude-opus-4-1-20250805"
    embedding_dim: int = 4096
    cache_dir: str = "cache"
    scripted_rules: str | None = None  # rules file for the scripted backend
    live_endpoint: str | None = None
    max_retries: int = 3
    backoff_base: float = 0.5
    workers: int = 1


@dataclass
class MergeConfig:
    eps: float = 0.2
    min_pts: int = 2


@dataclass
class ClusterConfig:
    k_min: int = 2
    k_max: int = 15
    seed: int = 7
    restarts: int = 10
    naming_representatives: int = 20


@dataclass
class GraphConfig:
    threshold: int = 5


@dataclass
class AnalysisConfig:
    seed: int = 7
    top_k: int = 20


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    page_size: int = 100
    admin_token: str | None = None


@dataclass
class AtlasConfig:
    sources: SourcesConfig = field(default_factory=SourcesConfig)
    provider: ProviderConfig = field(default_factory=ProviderConfig)
    merge: MergeConfig = field(default_factory=MergeConfig)
    cluster: ClusterConfig = field(default_factory=ClusterConfig)
    graph: GraphConfig = field(default_factory=GraphConfig)
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)
    service: ServiceConfig = field(default_factory=ServiceConfig)

    def to_document(self) -> dict[str, Any]:
        return asdict(self)


def _coerce(value: str, current: Any) -> Any:
    if isinstance(current, bool):
        return value.lower() in ("1", "true", "yes", "on")
    if isinstance(current, int) and not isinstance(current, bool):
        return int(value)
    if isinstance(current, float):
        return float(value)
    if isinstance(current, list):
        return [item.strip() for item in value.split(",") if item.strip()]
    return value


def _apply_env(config: AtlasConfig, environ: Mapping[str, str]) -> None:
    for section_field in fields(config):
        section = getattr(config, section_field.name)
        for key_field in fields(section):
            env_name = f"ATLAS_{section_field.name}_{key_field.name}".upper()
            if env_name in environ:
                current = getattr(section, key_field.name)
                setattr(section, key_field.name, _coerce(environ[env_name], current))


def load_config(
    path: str | Path | None = None, environ: Mapping[str, str] | None = None
) -> AtlasConfig:
    """Load configuration with defaults, file values, then env overrides."""
    config = AtlasConfig()
    if path is not None:
        document = json.loads(Path(path).read_text(encoding="utf-8"))
        for section_field in fields(config):
            section_doc = document.get(section_field.name)
            if section_doc is None:
                continue
            section = getattr(config, section_field.name)
            for key_field in fields(section):
                if key_field.name in section_doc:
                    setattr(section, key_field.name, section_doc[key_field.name])
    _apply_env(config, os.environ if environ is None else environ)
    return config
