"""Parse, validate, and canonically format entity keys.

An entity key names one research entity as ``type:subtype(specificity)>feature(specificity)``.
Both the subtype and the feature segment are optional (but at least one must be
present), specificities are optional refinements in parentheses, and a ``#``
prefix on the feature marks it as a perception rather than an objective
attribute.  The grammar accepted here:

    key     := type [":" segment] [">" segment]
    segment := ["#"] name ["(" name ")"]
    type    := "human" | "ai" | "co"

Names are lowercase ``[a-z0-9_]+``; spaces and dashes are mapped to
underscores during parsing, so messy inputs like ``"Human: Student"`` or
``"ai:co-creative"`` canonicalize instead of failing.  Only one level of
specificity is accepted; nested parentheses are rejected.  A ``#`` appearing
on the subtype segment of a feature-less key (``human:#trust``) is
canonicalized into a perception feature, which is how such keys are written
in merged form.

Everything downstream (merging, clustering, graph construction) consumes
:class:`EntityKey` values, never raw strings.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from enum import Enum

ENTITY_TYPES = ("human", "ai", "co")

# Canonical names: lowercase alphanumeric words joined by single underscores.
_NAME_RE = re.compile(r"^[a-z0-9]+(_[a-z0-9]+)*$")
_SEPARATOR_RE = re.compile(r"[-\s]+")


class Relationship(str, Enum):
    """Directional verbs a triplet may carry."""

    INCREASES = "INCREASES"
    DECREASES = "DECREASES"
    INFLUENCES = "INFLUENCES"


class Outcome(str, Enum):
    """Net-outcome tag attached to a relationship."""

    POSITIVE = "positive"
    NEGATIVE = "negative"
    NEUTRAL = "neutral"
    UNDETERMINED = "undetermined"


class KeyParseError(ValueError):
    """Raised when a string cannot be parsed as an entity key."""


def _canon_name(raw: str, *, what: str) -> str:
    """Normalize a name token: NFC, lowercase, separators to underscores."""
    text = unicodedata.normalize("NFC", raw).lower()
    text = _SEPARATOR_RE.sub("_", text.strip())
    text = re.sub(r"_+", "_", text).strip("_")
    if not text:
        raise KeyParseError(f"empty {what}")
    if not _NAME_RE.match(text):
        raise KeyParseError(f"illegal characters in {what}: {raw!r}")
    return text


@dataclass(frozen=True)
class Segment:
    """One subtype or feature segment of an entity key."""

    name: str
    specificity: str | None = None
    perception: bool = False

    def __post_init__(self) -> None:
        if not _NAME_RE.match(self.name):
            raise KeyParseError(f"invalid segment name: {self.name!r}")
        if self.specificity is not None and not _NAME_RE.match(self.specificity):
            raise KeyParseError(f"invalid specificity: {self.specificity!r}")

    def format(self) -> str:
        text = ("#" if self.perception else "") + self.name
        if self.specificity is not None:
            text += f"({self.specificity})"
        return text


@dataclass(frozen=True)
class EntityKey:
    """A parsed entity key; identity is the canonical string form."""

    entity_type: str
    subtype: Segment | None = None
    feature: Segment | None = None

    def __post_init__(self) -> None:
        if self.entity_type not in ENTITY_TYPES:
            raise KeyParseError(f"unknown entity type: {self.entity_type!r}")
        if self.subtype is None and self.feature is None:
            raise KeyParseError("key has neither subtype nor feature")
        if self.subtype is not None and self.subtype.perception:
            raise KeyParseError("perception marker is only valid on features")

    def __str__(self) -> str:
        return format_key(self)


def _parse_segment(raw: str, *, what: str) -> Segment:
    text = raw.strip()
    if not text:
        raise KeyParseError(f"empty {what} segment")
    perception = text.startswith("#")
    if perception:
        text = text[1:]
    if "#" in text:
        raise KeyParseError(f"stray '#' inside {what} segment: {raw!r}")
    open_count, close_count = text.count("("), text.count(")")
    if open_count != close_count or open_count > 1:
        raise KeyParseError(f"unbalanced or nested parentheses in {what}: {raw!r}")
    spec: str | None = None
    if open_count == 1:
        match = re.match(r"^(?P<name>[^()]+)\((?P<spec>[^()]*)\)\s*$", text)
        if match is None:
            raise KeyParseError(f"malformed specificity in {what}: {raw!r}")
        text = match.group("name")
        spec = _canon_name(match.group("spec"), what=f"{what} specificity")
    return Segment(
        name=_canon_name(text, what=f"{what} name"),
        specificity=spec,
        perception=perception,
    )


def parse_key(text: str) -> EntityKey:
    """Parse and canonicalize an entity key string.

    Raises :class:`KeyParseError` on unknown types, empty segments,
    unbalanced parentheses, or characters that remain illegal after
    canonicalization.
    """
    if not isinstance(text, str):
        raise KeyParseError(f"expected a string, got {type(text).__name__}")
    source = unicodedata.normalize("NFC", text).strip().lower()
    if not source:
        raise KeyParseError("empty key")

    head, _, feature_raw = source.partition(">")
    if ">" in feature_raw:
        raise KeyParseError(f"more than one '>' in key: {text!r}")
    type_raw, _, subtype_raw = head.partition(":")
    if ":" in subtype_raw:
        raise KeyParseError(f"more than one ':' in key: {text!r}")

    entity_type = type_raw.strip()
    if entity_type not in ENTITY_TYPES:
        raise KeyParseError(f"unknown entity type: {entity_type!r}")

    subtype = _parse_segment(subtype_raw, what="subtype") if subtype_raw.strip() else None
    if subtype_raw and not subtype_raw.strip():
        raise KeyParseError(f"empty subtype segment in key: {text!r}")
    if head.endswith(":") and subtype is None:
        raise KeyParseError(f"empty subtype segment in key: {text!r}")
    feature = _parse_segment(feature_raw, what="feature") if feature_raw.strip() else None
    if source.endswith(">") and feature is None:
        raise KeyParseError(f"empty feature segment in key: {text!r}")

    # Merged-form perception keys write the feature in subtype position
    # (human:#trust); canonicalize it into the feature slot.
    if subtype is not None and subtype.perception:
        if feature is not None:
            raise KeyParseError(
                f"perception marker on subtype of a key that already has a feature: {text!r}"
            )
        feature = Segment(subtype.name, subtype.specificity, perception=True)
        subtype = None

    return EntityKey(entity_type=entity_type, subtype=subtype, feature=feature)


def format_key(key: EntityKey) -> str:
    """Render the canonical surface form; ``parse_key`` of the result is a fixpoint."""
    parts = [key.entity_type]
    if key.subtype is not None:
        parts.append(":" + key.subtype.format())
    if key.feature is not None:
        parts.append(">" + key.feature.format())
    return "".join(parts)


def key_sort_value(key: EntityKey) -> str:
    """Sort value used wherever a deterministic key order is required."""
    return format_key(key)


@dataclass(frozen=True)
class TripletVerdict:
    """Validation outcome for one triplet; empty violations means accepted."""

    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def _check_key(value: object, *, side: str, violations: list[str]) -> None:
    if isinstance(value, EntityKey):
        if value.subtype is None and value.feature is None:
            violations.append(f"{side}: structurally empty key")
        return
    if isinstance(value, str):
        try:
            parse_key(value)
        except KeyParseError as exc:
            violations.append(f"{side}: invalid key ({exc})")
        return
    violations.append(f"{side}: not an entity key")


def validate_triplet(triplet: object) -> TripletVerdict:
    """Check a triplet's enums and keys; reports violations, never raises.

    Accepts any object with ``cause``, ``relationship``, ``effect`` and
    ``net_outcome`` attributes, where the keys may be :class:`EntityKey`
    values or raw strings still to be parsed.
    """
    violations: list[str] = []
    _check_key(getattr(triplet, "cause", None), side="cause", violations=violations)
    _check_key(getattr(triplet, "effect", None), side="effect", violations=violations)

    relationship = getattr(triplet, "relationship", None)
    rel_value = relationship.value if isinstance(relationship, Relationship) else relationship
    if rel_value not in {r.value for r in Relationship}:
        violations.append(f"unknown relationship: {rel_value!r}")

    outcome = getattr(triplet, "net_outcome", None)
    out_value = outcome.value if isinstance(outcome, Outcome) else outcome
    if out_value not in {o.value for o in Outcome}:
        violations.append(f"unknown net outcome: {out_value!r}")

    return TripletVerdict(tuple(violations))
