"""Model-provider abstraction with a content-addressed record/replay cache.

Every request is reduced to a digest of (model id, prompt template id,
rendered prompt).  Replay mode serves responses from the cache and treats a
miss as a hard error; recording mode delegates to an inner provider and
writes the response through.  The scripted provider generates deterministic
responses from a local rules file and is what the bundled fixtures were
recorded against.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import time
import urllib.request
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Mapping, Protocol

CREDENTIALS_ENV_VAR = "ATLAS_API_KEY"


@dataclass(frozen=True)
class ProviderRequest:
    model: str
    template_id: str
    prompt: str

    def digest(self) -> str:
        payload = json.dumps(
            {"model": self.model, "template": self.template_id, "prompt": self.prompt},
            sort_keys=True,
            ensure_ascii=False,
        )
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class ProviderError(Exception):
    """Base class for provider failures."""


class TransientProviderError(ProviderError):
    """Retryable failure (network hiccup, rate limit)."""


class ReplayMissError(ProviderError):
    """Replay mode was asked for a request that was never recorded."""

    def __init__(self, digest: str) -> None:
        super().__init__(f"no recorded response for request digest {digest}")
        self.digest = digest


class Provider(Protocol):
    def complete(self, request: ProviderRequest) -> bytes: ...


class ReplayCache:
    """Content-addressed response store: one file per request digest."""

    def __init__(self, directory: str | Path) -> None:
        self.directory = Path(directory)

    def path_for(self, digest: str) -> Path:
        return self.directory / digest

    def get(self, digest: str) -> bytes | None:
        path = self.path_for(digest)
        return path.read_bytes() if path.exists() else None

    def put(self, digest: str, response: bytes) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        self.path_for(digest).write_bytes(response)

    def __len__(self) -> int:
        if not self.directory.exists():
            return 0
        return sum(1 for p in self.directory.iterdir() if p.is_file())


class ReplayProvider:
    """Serves recorded responses only; never touches the network."""

    def __init__(self, cache: ReplayCache) -> None:
        self.cache = cache

    def complete(self, request: ProviderRequest) -> bytes:
        digest = request.digest()
        response = self.cache.get(digest)
        if response is None:
            raise ReplayMissError(digest)
        return response


class RecordingProvider:
    """Write-through wrapper: replays hits, records misses from ``inner``."""

    def __init__(self, inner: Provider, cache: ReplayCache) -> None:
        self.inner = inner
        self.cache = cache

    def complete(self, request: ProviderRequest) -> bytes:
        digest = request.digest()
        cached = self.cache.get(digest)
        if cached is not None:
            return cached
        response = self.inner.complete(request)
        self.cache.put(digest, response)
        return response


def cache_roundtrip(request: ProviderRequest, provider: Provider, cache: ReplayCache) -> bytes:
    """Resolve a request through the cache, writing live responses through."""
    return RecordingProvider(provider, cache).complete(request)


class RetryingProvider:
    """Retries transient failures with exponential backoff, then gives up."""

    def __init__(
        self,
        inner: Provider,
        attempts: int = 3,
        backoff_base: float = 0.5,
        sleep: Callable[[float], None] = time.sleep,
    ) -> None:
        if attempts < 1:
            raise ValueError("attempts must be >= 1")
        self.inner = inner
        self.attempts = attempts
        self.backoff_base = backoff_base
        self.sleep = sleep

    def complete(self, request: ProviderRequest) -> bytes:
        last: TransientProviderError | None = None
        for attempt in range(self.attempts):
            try:
                return self.inner.complete(request)
            except TransientProviderError as exc:
                last = exc
                if attempt < self.attempts - 1:
                    self.sleep(self.backoff_base * (2**attempt))
        assert last is not None
        raise last


class HttpProvider:
    """Minimal live backend: POSTs {model, prompt} as JSON to one endpoint.

    Never exercised by tests; exists so live runs have somewhere to plug in.
    Credentials come from the environment and are required only here.
    """

    def __init__(self, endpoint: str, timeout: float = 60.0) -> None:
        self.endpoint = endpoint
        self.timeout = timeout

    def complete(self, request: ProviderRequest) -> bytes:
        api_key = os.environ.get(CREDENTIALS_ENV_VAR)
        if not api_key:
            raise ProviderError(f"live mode requires {CREDENTIALS_ENV_VAR} to be set")
        body = json.dumps(
            {"model": request.model, "template": request.template_id, "prompt": request.prompt}
        ).encode("utf-8")
        http_request = urllib.request.Request(
            self.endpoint,
            data=body,
            headers={"Content-Type": "application/json", "Authorization": f"Bearer {api_key}"},
        )
        try:
            with urllib.request.urlopen(http_request, timeout=self.timeout) as response:
                return response.read()
        except OSError as exc:
            raise TransientProviderError(str(exc)) from exc


def _seeded_unit_vector(token: str, dim: int) -> list[float]:
    """Deterministic pseudo-gaussian unit vector derived from a token."""
    values: list[float] = []
    counter = 0
    while len(values) < dim:
        block = hashlib.sha256(f"{token}:{counter}".encode("utf-8")).digest()
        for i in range(0, len(block) - 7, 8):
            a = int.from_bytes(block[i : i + 4], "big") / 2**32
            b = int.from_bytes(block[i + 4 : i + 8], "big") / 2**32
            # Box-Muller; clamp a away from zero to keep log finite.
            a = max(a, 1e-12)
            values.append(math.sqrt(-2.0 * math.log(a)) * math.cos(2.0 * math.pi * b))
            if len(values) == dim:
                break
        counter += 1
    norm = math.sqrt(sum(v * v for v in values)) or 1.0
    return [v / norm for v in values]


class ScriptedProvider:
    """Deterministic offline provider driven by a rules document.

    Rules document layout::

        {
          "responses": [
            {"template": "<template id>",        # optional scope
             "match": "<substring of the prompt>",
             "response": "..."}
          ],
          "embedding": {
            "dim": 64,
            "family_weight": 1.0,
            "group_weight": 0.85,
            "jitter": 0.02,
            "groups": [["ai:gpt4", "ai:gpt_4", ...], ...],   # synonym groups
            "families": {"<family token>": ["<key>", ...]}    # thematic pools
          },
          "naming": {"<first representative key>": {"name": ..., "description": ...}}
        }

    Embeddings compose a family direction, a synonym-group direction shared
    by all aliases in a group, and a small per-key jitter, then normalize.
    Text responses are matched by substring against the rendered prompt,
    restricted to their template when one is given.
    """

    EMBED_TEMPLATE_PREFIX = "key-embedding"
    NAMING_TEMPLATE_PREFIX = "cluster-naming"

    def __init__(self, rules: Mapping[str, Any]) -> None:
        self.rules = rules
        self._group_of: dict[str, str] = {}
        embedding = rules.get("embedding", {})
        for group in embedding.get("groups", []):
            token = f"group:{min(group)}"
            for member in group:
                self._group_of[member] = token
        self._family_of: dict[str, str] = {}
        for family, members in embedding.get("families", {}).items():
            for member in members:
                self._family_of[member] = family

    def complete(self, request: ProviderRequest) -> bytes:
        if request.template_id.startswith(self.EMBED_TEMPLATE_PREFIX):
            return self._embed(request.prompt)
        if request.template_id.startswith(self.NAMING_TEMPLATE_PREFIX):
            return self._name(request.prompt)
        for rule in self.rules.get("responses", []):
            scope = rule.get("template")
            if scope is not None and not request.template_id.startswith(scope):
                continue
            if rule["match"] in request.prompt:
                return str(rule["response"]).encode("utf-8")
        raise ProviderError(f"no scripted response matches template {request.template_id!r}")

    def _embed(self, key: str) -> bytes:
        embedding = self.rules.get("embedding", {})
        dim = int(embedding.get("dim", 64))
        family_w = float(embedding.get("family_weight", 1.0))
        group_w = float(embedding.get("group_weight", 0.85))
        jitter_w = float(embedding.get("jitter", 0.02))
        group = self._group_of.get(key, f"solo:{key}")
        family = self._family_of.get(key, f"family:{group}")
        vector = [0.0] * dim
        for token, weight in ((family, family_w), (group, group_w), (f"jitter:{key}", jitter_w)):
            for i, v in enumerate(_seeded_unit_vector(token, dim)):
                vector[i] += weight * v
        norm = math.sqrt(sum(v * v for v in vector)) or 1.0
        rounded = [round(v / norm, 6) for v in vector]
        return json.dumps(rounded, separators=(",", " ")).encode("utf-8")

    def _name(self, prompt: str) -> bytes:
        reps = [line.strip("- ") for line in prompt.splitlines() if line.startswith("- ")]
        first = reps[0] if reps else ""
        entry = self.rules.get("naming", {}).get(first)
        if entry is None:
            label = " / ".join(reps[:2]) if reps else "unnamed"
            entry = {
                "name": f"Theme around {label}",
                "description": f"Keys grouped with {label} by embedding proximity.",
            }
        return json.dumps(entry, ensure_ascii=False, sort_keys=True).encode("utf-8")


def load_scripted_provider(rules_path: str | Path) -> ScriptedProvider:
    with open(rules_path, "r", encoding="utf-8") as handle:
        return ScriptedProvider(json.load(handle))
