"""Ingest, filter, and deduplicate paper metadata from scholarly sources.

Each source declares a small adapter that maps its native record layout onto
:class:`PaperRecord`.  The fixture source reads local JSON files and is the
only backend exercised by tests; live backends would slot in behind the same
adapter surface.  Filtering and dedup are pure functions over immutable
record lists.
"""

from __future__ import annotations

import hashlib
import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping

from .canonical import read_jsonl, write_jsonl

SOURCE_DBS = ("acm", "ieee", "springer", "arxiv", "fixture")

DEFAULT_SOURCE_PRIORITY = ["acm", "ieee", "springer", "arxiv", "fixture"]

# Publication-type whitelist per source; fixture mirrors the ACM list.
DEFAULT_PUB_TYPES: dict[str, list[str]] = {
    "acm": [
        "Extended Abstract",
        "Research Article",
        "Work in Progress",
        "Poster",
        "Short Paper",
    ],
    "ieee": ["Journal", "Conference"],
    "springer": ["Research Article"],
    "arxiv": ["Preprint"],
    "fixture": [
        "Extended Abstract",
        "Research Article",
        "Work in Progress",
        "Poster",
        "Short Paper",
    ],
}

_PUNCT_RE = re.compile(r"[!-/:-@\[-`{-~]")


@dataclass(frozen=True)
class PaperRecord:
    """One paper's metadata and abstract, with source provenance."""

    id: str
    title: str
    abstract: str
    venue: str
    source_db: str
    pub_type: str
    year: int | None
    authors: tuple[str, ...] = ()
    doi: str | None = None
    url: str | None = None

    def to_row(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "title": self.title,
            "abstract": self.abstract,
            "venue": self.venue,
            "source_db": self.source_db,
            "pub_type": self.pub_type,
            "year": self.year,
            "authors": list(self.authors),
            "doi": self.doi,
            "url": self.url,
        }

    @classmethod
    def from_row(cls, row: Mapping[str, Any]) -> "PaperRecord":
        return cls(
            id=row["id"],
            title=row["title"],
            abstract=row.get("abstract") or "",
            venue=row.get("venue") or "",
            source_db=row["source_db"],
            pub_type=row.get("pub_type") or "",
            year=row.get("year"),
            authors=tuple(row.get("authors") or ()),
            doi=row.get("doi"),
            url=row.get("url"),
        )


@dataclass(frozen=True)
class CorpusFilter:
    """Filtering policy: pub-type whitelist per source plus abstract presence."""

    allowed_pub_types: Mapping[str, Iterable[str]]
    require_abstract: bool = True
    query_terms: tuple[str, ...] = ()

    def allows(self, record: PaperRecord) -> bool:
        allowed = self.allowed_pub_types.get(record.source_db)
        if allowed is None:
            raise ValueError(f"filter not configured for source {record.source_db!r}")
        return record.pub_type in set(allowed)


@dataclass
class IngestReport:
    """Accounting for one filtering pass: kept + dropped covers every input."""

    kept: int = 0
    dropped: list[tuple[str, str]] = field(default_factory=list)

    def to_document(self) -> dict[str, Any]:
        return {
            "kept": self.kept,
            "dropped": [{"id": rid, "reason": reason} for rid, reason in self.dropped],
        }


@dataclass(frozen=True)
class SourceConfig:
    name: str
    priority: tuple[str, ...] = tuple(DEFAULT_SOURCE_PRIORITY)


@dataclass(frozen=True)
class IngestError:
    native_id: str | None
    message: str


def stable_id(source_db: str, native_id: str, doi: str | None) -> str:
    """DOI when present, else a 16-hex content hash of (source, native id)."""
    if doi:
        return doi.strip().lower()
    digest = hashlib.sha256(f"{source_db}:{native_id}".encode("utf-8")).hexdigest()
    return digest[:16]


def _adapt_fixture(raw: Mapping[str, Any]) -> dict[str, Any]:
    return {
        "native_id": raw["native_id"],
        "title": raw["title"],
        "abstract": raw.get("abstract") or "",
        "venue": raw.get("venue") or "",
        "pub_type": raw.get("type") or "",
        "year": raw.get("year"),
        "authors": raw.get("authors") or [],
        "doi": raw.get("doi"),
        "url": raw.get("url"),
    }


def _adapt_acm(raw: Mapping[str, Any]) -> dict[str, Any]:
    return {
        "native_id": raw["acm_id"],
        "title": raw["title"],
        "abstract": raw.get("abstract") or "",
        "venue": raw.get("proceedings") or "",
        "pub_type": raw.get("content_type") or "",
        "year": raw.get("year"),
        "authors": raw.get("authors") or [],
        "doi": raw.get("doi"),
        "url": raw.get("url"),
    }


def _adapt_ieee(raw: Mapping[str, Any]) -> dict[str, Any]:
    return {
        "native_id": str(raw["article_number"]),
        "title": raw["title"],
        "abstract": raw.get("abstract") or "",
        "venue": raw.get("publication_title") or "",
        "pub_type": raw.get("content_type") or "",
        "year": raw.get("publication_year"),
        "authors": raw.get("authors") or [],
        "doi": raw.get("doi"),
        "url": raw.get("pdf_url"),
    }


def _adapt_springer(raw: Mapping[str, Any]) -> dict[str, Any]:
    return {
        "native_id": raw["identifier"],
        "title": raw["title"],
        "abstract": raw.get("abstract") or "",
        "venue": raw.get("publication_name") or "",
        "pub_type": raw.get("content_type") or "",
        "year": raw.get("publication_date", "")[:4] or None,
        "authors": [a.get("creator", "") for a in raw.get("creators", [])],
        "doi": raw.get("doi"),
        "url": raw.get("url"),
    }


def _adapt_arxiv(raw: Mapping[str, Any]) -> dict[str, Any]:
    return {
        "native_id": raw["arxiv_id"],
        "title": raw["title"],
        "abstract": raw.get("summary") or "",
        "venue": "arXiv",
        "pub_type": "Preprint",
        "year": raw.get("year"),
        "authors": raw.get("authors") or [],
        "doi": raw.get("doi"),
        "url": raw.get("link"),
    }


_ADAPTERS = {
    "fixture": _adapt_fixture,
    "acm": _adapt_acm,
    "ieee": _adapt_ieee,
    "springer": _adapt_springer,
    "arxiv": _adapt_arxiv,
}


def ingest_source(
    config: SourceConfig, raw_records: Iterable[Mapping[str, Any]]
) -> tuple[list[PaperRecord], list[IngestError]]:
    """Map source-native records onto PaperRecords, in input order.

    Schema violations are collected per record rather than aborting the
    whole batch.
    """
    if config.name not in _ADAPTERS:
        raise ValueError(f"unknown source: {config.name!r}")
    adapter = _ADAPTERS[config.name]
    records: list[PaperRecord] = []
    errors: list[IngestError] = []
    for raw in raw_records:
        try:
            fields = adapter(raw)
            year = fields["year"]
            records.append(
                PaperRecord(
                    id=stable_id(config.name, str(fields["native_id"]), fields["doi"]),
                    title=str(fields["title"]),
                    abstract=str(fields["abstract"]),
                    venue=str(fields["venue"]),
                    source_db=config.name,
                    pub_type=str(fields["pub_type"]),
                    year=int(year) if year not in (None, "") else None,
                    authors=tuple(str(a) for a in fields["authors"]),
                    doi=fields["doi"],
                    url=fields["url"],
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            native = raw.get("native_id") if isinstance(raw, Mapping) else None
            errors.append(IngestError(native_id=native, message=f"{type(exc).__name__}: {exc}"))
    return records, errors


def filter_corpus(
    records: Iterable[PaperRecord], corpus_filter: CorpusFilter
) -> tuple[list[PaperRecord], IngestReport]:
    """Partition records into kept and dropped; never fails, always accounts."""
    kept: list[PaperRecord] = []
    report = IngestReport()
    for record in records:
        if corpus_filter.require_abstract and not record.abstract.strip():
            report.dropped.append((record.id, "missing_abstract"))
        elif not corpus_filter.allows(record):
            report.dropped.append((record.id, "pub_type_excluded"))
        else:
            kept.append(record)
    report.kept = len(kept)
    return kept, report


def normalize_title(title: str) -> str:
    """NFC, lowercase, strip ASCII punctuation, collapse whitespace."""
    text = unicodedata.normalize("NFC", title).lower()
    text = _PUNCT_RE.sub(" ", text)
    return re.sub(r"\s+", " ", text).strip()


def dedupe(
    records: list[PaperRecord],
    priority: Iterable[str] = DEFAULT_SOURCE_PRIORITY,
    report: IngestReport | None = None,
) -> list[PaperRecord]:
    """Collapse records sharing a DOI or a normalized title.

    The survivor of each duplicate group is the record whose source ranks
    highest in ``priority`` (ties: earliest input position).  Survivors keep
    their input order, so the pass is idempotent and order-preserving.
    """
    rank = {name: i for i, name in enumerate(priority)}
    parent = list(range(len(records)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int) -> None:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    by_doi: dict[str, int] = {}
    by_title: dict[str, int] = {}
    for i, record in enumerate(records):
        if record.doi:
            doi = record.doi.strip().lower()
            if doi in by_doi:
                union(by_doi[doi], i)
            else:
                by_doi[doi] = i
        title = normalize_title(record.title)
        if title:
            if title in by_title:
                union(by_title[title], i)
            else:
                by_title[title] = i

    groups: dict[int, list[int]] = {}
    for i in range(len(records)):
        groups.setdefault(find(i), []).append(i)

    survivors: list[int] = []
    for members in groups.values():
        best = min(members, key=lambda i: (rank.get(records[i].source_db, len(rank)), i))
        survivors.append(best)
        if report is not None:
            for i in members:
                if i != best:
                    report.dropped.append((records[i].id, "duplicate"))
    return [records[i] for i in sorted(survivors)]


def write_corpus(records: Iterable[PaperRecord], path: str | Path) -> int:
    return write_jsonl((r.to_row() for r in records), path)


def read_corpus(path: str | Path) -> list[PaperRecord]:
    return [PaperRecord.from_row(row) for row in read_jsonl(path)]
