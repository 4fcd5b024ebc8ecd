"""Atlas: a knowledge graph of empirical human-AI interaction findings.

The pipeline turns a corpus of paper abstracts into a navigable graph:
corpus ingestion and filtering, two-stage findings/triplet extraction,
embedding-based synonym merging, thematic clustering, graph construction,
and community/structural-hole analytics, served over a read-only HTTP API.
"""

from .notation import (
    EntityKey,
    KeyParseError,
    Outcome,
    Relationship,
    Segment,
    format_key,
    parse_key,
    validate_triplet,
)

__version__ = "0.1.0"

__all__ = [
    "EntityKey",
    "KeyParseError",
    "Outcome",
    "Relationship",
    "Segment",
    "format_key",
    "parse_key",
    "validate_triplet",
    "__version__",
]
