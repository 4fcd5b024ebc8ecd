"""Canonical JSON / JSON-lines serialization shared by all pipeline artifacts.

Exports must be byte-identical across runs and platforms, so every float is
rounded to nine decimal places before serialization and documents are written
with sorted keys and fixed separators.  JSON-lines rows keep their insertion
order instead (the row layouts are documented per record type and stay fixed
for diff-stability).
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any, Iterable, Iterator

FLOAT_DECIMALS = 9


def normalize_floats(value: Any) -> Any:
    """Round every float in a JSON-like structure to a fixed precision."""
    if isinstance(value, float):
        rounded = round(value, FLOAT_DECIMALS)
        # Avoid exporting the float -0.0, which formats differently.
        return 0.0 if rounded == 0 else rounded
    if isinstance(value, dict):
        return {k: normalize_floats(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [normalize_floats(v) for v in value]
    return value


def canonical_json_bytes(document: Any) -> bytes:
    """Serialize a document to canonical UTF-8 JSON bytes (sorted keys)."""
    text = json.dumps(
        normalize_floats(document),
        sort_keys=True,
        ensure_ascii=False,
        separators=(",", ":"),
        allow_nan=False,
    )
    return text.encode("utf-8") + b"\n"


def dump_json(document: Any, path: str | Path) -> None:
    Path(path).write_bytes(canonical_json_bytes(document))


def load_json(path: str | Path) -> Any:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def jsonl_line(row: dict[str, Any]) -> str:
    """One JSON-lines row; insertion order preserved, no float surprises."""
    return json.dumps(
        normalize_floats(row), ensure_ascii=False, separators=(", ", ": "), allow_nan=False
    )


def write_jsonl(rows: Iterable[dict[str, Any]], path: str | Path) -> int:
    count = 0
    with open(path, "w", encoding="utf-8") as handle:
        for row in rows:
            handle.write(jsonl_line(row) + "\n")
            count += 1
    return count


def read_jsonl(path: str | Path) -> Iterator[dict[str, Any]]:
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                yield json.loads(line)


def sha256_file(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()
