"""Two-stage findings/triplet extraction behind the provider abstraction.

Stage one turns a paper abstract into at most three one-sentence findings
(or a typed note explaining why there are none); stage two turns each
finding into a cause/relationship/effect triplet.  Responses come through
the record/replay cache, so replay runs are bit-deterministic.  Papers or
findings whose responses cannot be parsed are quarantined with the raw
response retained; the run carries on.
"""

from __future__ import annotations

import json
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Union

from . import prompts
from .canonical import write_jsonl
from .corpus import PaperRecord
from .notation import EntityKey, KeyParseError, format_key, parse_key, validate_triplet
from .providers import (
    Provider,
    ProviderError,
    ProviderRequest,
    ReplayCache,
    ReplayMissError,
    RetryingProvider,
    cache_roundtrip,
)

NOTE_TYPES = (
    "conceptual_framework",
    "systematic_review",
    "workshop_announcement",
    "system_methodology_improvement",
    "design_methodology",
    "technical_specification",
    "research_proposal",
    "other",
)

_NOTE_TYPE_ALIASES = {
    "conceptual_framework": "conceptual_framework",
    "systematic_review": "systematic_review",
    "workshop_announcement": "workshop_announcement",
    "system_and_methodology_improvement": "system_methodology_improvement",
    "system_methodology_improvement": "system_methodology_improvement",
    "design_methodology": "design_methodology",
    "technical_specification": "technical_specification",
    "research_proposal": "research_proposal",
}

# Tags the stage-one prompt forbids; dropped defensively if they show up.
GENERIC_KEYWORDS = {
    "human-ai interaction",
    "human ai interaction",
    "human-computer interaction",
    "human computer interaction",
    "hci",
    "ai",
    "artificial intelligence",
}

MAX_FINDINGS_PER_PAPER = 3

_BULLET_RE = re.compile(r"^(?:[-*•]|\d+[.)])\s+(?P<text>\S.*)$")
_FIELD_RE = re.compile(r"^(?P<field>keywords?|type|description)\s*:\s*(?P<value>.*)$", re.I)


class ResponseParseError(ValueError):
    """Provider response did not match any expected shape."""


@dataclass(frozen=True)
class Finding:
    """One empirical finding extracted from a paper abstract."""

    paper_id: str
    index: int
    text: str
    keywords: tuple[str, ...] = ()

    @property
    def ref(self) -> str:
        return f"{self.paper_id}#{self.index}"

    def to_row(self) -> dict[str, Any]:
        return {
            "paper_id": self.paper_id,
            "index": self.index,
            "text": self.text,
            "keywords": list(self.keywords),
        }


@dataclass(frozen=True)
class NoFindingsNote:
    """Typed explanation for a paper without extractable findings."""

    paper_id: str
    note_type: str
    description: str

    def to_row(self) -> dict[str, Any]:
        return {
            "paper_id": self.paper_id,
            "note_type": self.note_type,
            "description": self.description,
        }


@dataclass(frozen=True)
class RawTriplet:
    """Structured cause/relationship/effect form of one finding."""

    finding_ref: str
    paper_id: str
    finding_text: str
    cause: EntityKey
    relationship: str
    effect: EntityKey
    net_outcome: str

    def to_row(self) -> dict[str, Any]:
        return {
            "finding_ref": self.finding_ref,
            "paper_id": self.paper_id,
            "finding_text": self.finding_text,
            "cause": format_key(self.cause),
            "relationship": self.relationship,
            "effect": format_key(self.effect),
            "net_outcome": self.net_outcome,
        }

    @classmethod
    def from_row(cls, row: Mapping[str, Any]) -> "RawTriplet":
        return cls(
            finding_ref=row["finding_ref"],
            paper_id=row["paper_id"],
            finding_text=row["finding_text"],
            cause=parse_key(row["cause"]),
            relationship=row["relationship"],
            effect=parse_key(row["effect"]),
            net_outcome=row["net_outcome"],
        )


@dataclass(frozen=True)
class QuarantineEntry:
    """A paper or finding whose extraction could not be completed."""

    paper_id: str
    scope: str  # "paper" | "finding"
    stage: str  # "findings" | "triplet"
    reason: str
    finding_ref: str | None = None
    raw_response: str | None = None

    def to_row(self) -> dict[str, Any]:
        return {
            "paper_id": self.paper_id,
            "scope": self.scope,
            "stage": self.stage,
            "reason": self.reason,
            "finding_ref": self.finding_ref,
            "raw_response": self.raw_response,
        }


def normalize_note_type(raw: str) -> str:
    token = re.sub(r"[^a-z0-9]+", "_", raw.strip().lower()).strip("_")
    return _NOTE_TYPE_ALIASES.get(token, "other")


def _clean_keywords(raw: str) -> tuple[str, ...]:
    tags = [t.strip() for t in re.split(r"[,;]", raw) if t.strip()]
    kept = [t for t in tags if t.lower() not in GENERIC_KEYWORDS]
    return tuple(kept[:3])


def parse_findings_response(paper_id: str, text: str) -> Union[list[Finding], NoFindingsNote]:
    """Parse a stage-one response into findings or a typed no-findings note.

    The bullet parser is tolerant of ``-``, ``*``, and numbered markers; the
    findings cap is enforced here by truncation in response order.
    """
    bullets: list[str] = []
    keywords: tuple[str, ...] = ()
    note_type: str | None = None
    description = ""
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped:
            continue
        bullet = _BULLET_RE.match(stripped)
        if bullet:
            bullets.append(bullet.group("text").strip())
            continue
        tagged = _FIELD_RE.match(stripped)
        if tagged:
            name = tagged.group("field").lower()
            value = tagged.group("value").strip()
            if name.startswith("keyword"):
                keywords = _clean_keywords(value)
            elif name == "type":
                note_type = normalize_note_type(value)
            elif name == "description":
                description = value
    if bullets:
        return [
            Finding(paper_id=paper_id, index=i, text=text, keywords=keywords)
            for i, text in enumerate(bullets[:MAX_FINDINGS_PER_PAPER])
        ]
    if note_type is not None:
        return NoFindingsNote(paper_id=paper_id, note_type=note_type, description=description)
    raise ResponseParseError("response contains neither findings bullets nor a typed note")


def _subject_to_key(subject: Any, *, side: str) -> EntityKey:
    if isinstance(subject, str):
        return parse_key(subject)
    if not isinstance(subject, Mapping):
        raise ResponseParseError(f"{side} is neither an object nor a key string")
    entity_type = str(subject.get("type", "")).strip()
    subtype = str(subject.get("subtype", "") or "").strip()
    feature = str(subject.get("feature", "") or "").strip()
    text = entity_type
    if subtype:
        text += f":{subtype}"
    if feature:
        text += f">{feature}"
    return parse_key(text)


def _extract_json_object(text: str) -> Mapping[str, Any]:
    try:
        value = json.loads(text)
        if isinstance(value, Mapping):
            return value
    except json.JSONDecodeError:
        pass
    start = text.find("{")
    while start != -1:
        depth = 0
        for end in range(start, len(text)):
            if text[end] == "{":
                depth += 1
            elif text[end] == "}":
                depth -= 1
                if depth == 0:
                    try:
                        value = json.loads(text[start : end + 1])
                        if isinstance(value, Mapping):
                            return value
                    except json.JSONDecodeError:
                        break
        start = text.find("{", start + 1)
    raise ResponseParseError("no JSON object found in triplet response")


def parse_triplet_response(finding: Finding, text: str) -> RawTriplet:
    """Parse a stage-two response into a validated RawTriplet."""
    payload = _extract_json_object(text)
    try:
        cause = _subject_to_key(payload.get("cause"), side="cause")
        effect = _subject_to_key(payload.get("effect"), side="effect")
    except KeyParseError as exc:
        raise ResponseParseError(f"malformed key: {exc}") from exc
    triplet = RawTriplet(
        finding_ref=finding.ref,
        paper_id=finding.paper_id,
        finding_text=finding.text,
        cause=cause,
        relationship=str(payload.get("relationship", "")).strip(),
        effect=effect,
        net_outcome=str(payload.get("net_outcome", "")).strip(),
    )
    verdict = validate_triplet(triplet)
    if not verdict.ok:
        raise ResponseParseError("; ".join(verdict.violations))
    return triplet


def extract_findings(
    paper: PaperRecord, provider: Provider, cache: ReplayCache, model: str
) -> Union[list[Finding], NoFindingsNote]:
    """Stage one for a single paper.  Raises on empty abstracts."""
    if not paper.abstract.strip():
        raise ValueError(f"paper {paper.id} has an empty abstract")
    request = ProviderRequest(
        model=model,
        template_id=prompts.FINDINGS_TEMPLATE_ID,
        prompt=prompts.render_findings_prompt(paper.abstract),
    )
    response = cache_roundtrip(request, provider, cache)
    return parse_findings_response(paper.id, response.decode("utf-8"))


def extract_triplet(
    finding: Finding, provider: Provider, cache: ReplayCache, model: str
) -> RawTriplet:
    """Stage two for a single finding."""
    if not finding.text.strip():
        raise ValueError(f"finding {finding.ref} has empty text")
    request = ProviderRequest(
        model=model,
        template_id=prompts.TRIPLET_TEMPLATE_ID,
        prompt=prompts.render_triplet_prompt(finding.text),
    )
    response = cache_roundtrip(request, provider, cache)
    return parse_triplet_response(finding, response.decode("utf-8"))


@dataclass
class ExtractionRun:
    """Merged results of one extraction pass over a corpus."""

    findings: list[Finding] = field(default_factory=list)
    notes: list[NoFindingsNote] = field(default_factory=list)
    triplets: list[RawTriplet] = field(default_factory=list)
    quarantine: list[QuarantineEntry] = field(default_factory=list)

    def write(self, findings_path, triplets_path, notes_path, quarantine_path) -> None:
        write_jsonl((f.to_row() for f in self.findings), findings_path)
        write_jsonl((t.to_row() for t in self.triplets), triplets_path)
        write_jsonl((n.to_row() for n in self.notes), notes_path)
        write_jsonl((q.to_row() for q in self.quarantine), quarantine_path)


def _extract_paper(
    paper: PaperRecord, provider: Provider, cache: ReplayCache, model: str
) -> tuple[list[Finding], list[NoFindingsNote], list[RawTriplet], list[QuarantineEntry]]:
    findings: list[Finding] = []
    notes: list[NoFindingsNote] = []
    triplets: list[RawTriplet] = []
    quarantine: list[QuarantineEntry] = []
    try:
        outcome = extract_findings(paper, provider, cache, model)
    except ReplayMissError:
        raise  # a missing recording is a broken setup, not a bad paper
    except (ProviderError, ResponseParseError) as exc:
        quarantine.append(
            QuarantineEntry(
                paper_id=paper.id,
                scope="paper",
                stage="findings",
                reason=str(exc),
            )
        )
        return findings, notes, triplets, quarantine
    if isinstance(outcome, NoFindingsNote):
        notes.append(outcome)
        return findings, notes, triplets, quarantine
    findings.extend(outcome)
    for finding in outcome:
        try:
            triplets.append(extract_triplet(finding, provider, cache, model))
        except ReplayMissError:
            raise
        except (ProviderError, ResponseParseError) as exc:
            raw = None
            if isinstance(exc, ResponseParseError):
                request = ProviderRequest(
                    model=model,
                    template_id=prompts.TRIPLET_TEMPLATE_ID,
                    prompt=prompts.render_triplet_prompt(finding.text),
                )
                cached = cache.get(request.digest())
                raw = cached.decode("utf-8", errors="replace") if cached else None
            quarantine.append(
                QuarantineEntry(
                    paper_id=paper.id,
                    scope="finding",
                    stage="triplet",
                    reason=str(exc),
                    finding_ref=finding.ref,
                    raw_response=raw,
                )
            )
    return findings, notes, triplets, quarantine


def run_extraction(
    papers: Iterable[PaperRecord],
    provider: Provider,
    cache: ReplayCache,
    model: str,
    max_retries: int = 3,
    backoff_base: float = 0.5,
    workers: int = 1,
) -> ExtractionRun:
    """Extract findings and triplets for a whole corpus.

    Per-paper tasks are independent; results are merged in paper-id order so
    the run is deterministic regardless of worker count.
    """
    retrying = RetryingProvider(provider, attempts=max_retries, backoff_base=backoff_base)
    ordered = sorted(papers, key=lambda p: p.id)
    run = ExtractionRun()

    def task(paper: PaperRecord):
        return _extract_paper(paper, retrying, cache, model)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(task, ordered))
    else:
        results = [task(paper) for paper in ordered]

    for findings, notes, triplets, quarantine in results:
        run.findings.extend(findings)
        run.notes.extend(notes)
        run.triplets.extend(triplets)
        run.quarantine.extend(quarantine)
    return run
