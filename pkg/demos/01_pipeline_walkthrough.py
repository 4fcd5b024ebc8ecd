#!/usr/bin/env python3
"""Walk the full pipeline over the bundled fixture corpus, offline.

Every stage runs in replay mode against the recorded provider responses in
fixtures/cache, so this demo needs no credentials and produces the same
bytes on every run.  Outputs land in demos/out/.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from click.testing import CliRunner

from atlas.cli import main as atlas_cli

OUT = ROOT / "demos" / "out"
FIXTURES = ROOT / "fixtures"


def atlas(*args: str) -> None:
    argv = ["--config", str(FIXTURES / "atlas.config.json"), *args]
    print(f"\n$ atlas {' '.join(args)}")
    result = CliRunner().invoke(atlas_cli, argv, catch_exceptions=False)
    print(result.output, end="")


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    cache = str(FIXTURES / "cache")

    atlas(
        "ingest",
        "--source", "fixture",
        "--in", str(FIXTURES / "sources" / "fixture_papers.json"),
        "--out", str(OUT / "raw.jsonl"),
    )
    atlas(
        "filter",
        "--in", str(OUT / "raw.jsonl"),
        "--out", str(OUT / "corpus.jsonl"),
        "--report", str(OUT / "filter_report.json"),
    )
    atlas(
        "extract",
        "--corpus", str(OUT / "corpus.jsonl"),
        "--cache", cache,
        "--mode", "replay",
        "--out", f"{OUT / 'findings.jsonl'},{OUT / 'triplets.jsonl'}",
    )
    atlas(
        "merge",
        "--triplets", str(OUT / "triplets.jsonl"),
        "--cache", cache,
        "--mode", "replay",
        "--vectors", str(OUT / "vectors.f32"),
        "--merge-map", str(OUT / "merge_map.json"),
        "--out", str(OUT / "merged_triplets.jsonl"),
    )
    atlas(
        "cluster",
        "--triplets", str(OUT / "merged_triplets.jsonl"),
        "--vectors", str(OUT / "vectors.f32"),
        "--cache", cache,
        "--mode", "replay",
        "--out", str(OUT / "clusters.json"),
    )
    atlas(
        "build-graph",
        "--triplets", str(OUT / "merged_triplets.jsonl"),
        "--clusters", str(OUT / "clusters.json"),
        "--out", str(OUT / "atlas.json"),
    )
    atlas(
        "analyze",
        "--in", str(OUT / "atlas.json"),
        "--out", str(OUT / "analysis.json"),
        "--tables", "--top-k", "5",
    )

    # A few things worth noticing in the outputs:
    merge_map = json.loads((OUT / "merge_map.json").read_text())
    print("\nSynonym clusters the embedding merge found:")
    for cluster in merge_map["clusters"]:
        print(f"  {cluster['canonical']}  <-  {cluster['members']}")

    graph = json.loads((OUT / "atlas.json").read_text())
    hubs = [n["id"] for n in graph["nodes"] if n["is_split_feature"]]
    print(f"\nFeatures split into standalone hub nodes: {hubs}")
    heavy = max(graph["edges"], key=lambda e: e["weight"])
    print(
        f"Heaviest edge: {heavy['source']} -[{heavy['relationship']}]-> "
        f"{heavy['target']} carrying {heavy['weight']} findings"
    )


if __name__ == "__main__":
    main()
