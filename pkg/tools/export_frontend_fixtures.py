#!/usr/bin/env python3
"""Snapshot fixture API responses for the frontend's contract tests.

Runs the replay pipeline, boots the service in-process, and saves the JSON
bodies the frontend consumes into frontend/tests/fixtures/.  Re-run after
any change to the pipeline fixtures or the API payloads.
"""

from __future__ import annotations

import json
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))
sys.path.insert(0, str(ROOT / "tests"))

from fastapi.testclient import TestClient  # noqa: E402

from atlas.service import SnapshotPaths, create_app  # noqa: E402
from conftest import run_fixture_pipeline  # noqa: E402

OUT = ROOT / "frontend" / "tests" / "fixtures"


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as work:
        artifacts = run_fixture_pipeline(Path(work))
        paths = SnapshotPaths(
            graph=str(artifacts["atlas.json"]),
            analysis=str(artifacts["analysis.json"]),
            corpus=str(artifacts["corpus.jsonl"]),
            findings=str(artifacts["findings.jsonl"]),
            notes=str(artifacts["notes.jsonl"]),
        )
        client = TestClient(create_app(paths, admin_token="fixture-admin"))

        captures = {
            "graph.json": "/api/graph",
            "clusters.json": "/api/clusters",
            "analysis.json": "/api/analysis",
            "stats.json": "/api/stats",
            "flows_by_cluster.json": "/api/flows?group_by=thematic_cluster&limit=1000",
            "flows_by_node.json": "/api/flows?group_by=node&limit=1000",
            "papers_page1.json": "/api/papers?limit=10",
            "papers_all.json": "/api/papers?limit=100",
            "search_music.json": "/api/search?q=music",
        }
        for filename, url in captures.items():
            response = client.get(url)
            response.raise_for_status()
            (OUT / filename).write_text(
                json.dumps(response.json(), indent=2, sort_keys=True) + "\n",
                encoding="utf-8",
            )
            print(f"wrote {filename} ({len(response.content)} bytes)")

        paper_id = "10.9999/atlas.p20"
        response = client.get(f"/api/papers/{paper_id}")
        response.raise_for_status()
        (OUT / "paper_p20.json").write_text(
            json.dumps(response.json(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        print("wrote paper_p20.json")


if __name__ == "__main__":
    main()
