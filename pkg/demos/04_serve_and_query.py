#!/usr/bin/env python3
"""Query the read-only API over the fixture snapshot, in process.

Runs demo 01's outputs through the service layer (run that first) and walks
the three read paths the UI uses: graph slices, Sankey flow rows, and paper
lookups, plus search.
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from fastapi.testclient import TestClient

from atlas.service import SnapshotPaths, create_app

OUT = ROOT / "demos" / "out"


def main() -> None:
    if not (OUT / "atlas.json").exists():
        sys.exit("run demos/01_pipeline_walkthrough.py first to produce demos/out/")
    paths = SnapshotPaths(
        graph=str(OUT / "atlas.json"),
        analysis=str(OUT / "analysis.json"),
        corpus=str(OUT / "corpus.jsonl"),
        findings=str(OUT / "findings.jsonl"),
        notes=str(OUT / "notes.jsonl"),
    )
    client = TestClient(create_app(paths, admin_token="demo"))

    stats = client.get("/api/stats").json()
    print(f"snapshot: {stats['nodes']} nodes, {stats['edges']} edges, {stats['papers']} papers")

    print("\nGET /api/graph?type=ai  (3D view slice)")
    graph_slice = client.get("/api/graph", params={"type": "ai"}).json()
    print(f"  {len(graph_slice['nodes'])} ai nodes, {len(graph_slice['edges'])} internal edges")

    print("\nGET /api/flows?group_by=thematic_cluster  (Sankey rows)")
    flows = client.get("/api/flows", params={"group_by": "thematic_cluster"}).json()
    for row in flows["items"][:5]:
        print(
            f"  {row['source_group']:>14} -[{row['relationship']}]-> "
            f"{row['target_group']:<14} x{row['count']}"
        )
    print(f"  ... {flows['total']} rows, {flows['total_count']} findings total")

    print("\nGET /api/search?q=music  (shared search)")
    hits = client.get("/api/search", params={"q": "music"}).json()
    print(f"  nodes: {[n['id'] for n in hits['nodes']]}")
    print(f"  papers: {[p['id'] for p in hits['papers']]}")

    paper_id = hits["papers"][0]["id"]
    print(f"\nGET /api/papers/{paper_id}  (paper view)")
    paper = client.get(f"/api/papers/{paper_id}").json()
    print(f"  {paper['paper']['title']}")
    for finding in paper["findings"]:
        print(f"  - {finding['text']}")
    print(f"  appears on edges: {paper['edge_ids']}")


if __name__ == "__main__":
    main()
