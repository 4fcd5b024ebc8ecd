"""Read-only HTTP API over one immutable snapshot of the exported artifacts.

The service never computes pipeline results; it loads the graph, analysis,
corpus, and findings files produced by the CLI and answers the three read
paths the UI needs: graph slices for the 3D view, flow aggregations for the
Sankey view, and paper lookups for the paper view.  Reloading swaps in a
fresh snapshot atomically behind an admin token; requests in flight keep the
snapshot they started with.
"""

from __future__ import annotations

import base64
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from .canonical import read_jsonl
from .graph import SCHEMA_VERSION, AtlasGraph, load_graph

FLOW_SAMPLE_CAP = 5

_TOKEN_RE = re.compile(r"[a-z0-9]+")


class ApiError(Exception):
    def __init__(self, code: str, message: str, status: int = 400) -> None:
        super().__init__(message)
        self.code = code
        self.message = message
        self.status = status


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class FlowRow:
    source_group: str
    relationship: str
    target_group: str
    count: int
    sample_findings: tuple[dict[str, str], ...]

    def to_document(self) -> dict[str, Any]:
        return {
            "source_group": self.source_group,
            "relationship": self.relationship,
            "target_group": self.target_group,
            "count": self.count,
            "sample_findings": list(self.sample_findings),
        }


@dataclass(frozen=True)
class FlowFilter:
    cause_type: str | None = None
    effect_type: str | None = None
    cluster: str | None = None


def aggregate_flows(
    graph: AtlasGraph, group_by: str = "thematic_cluster", flow_filter: FlowFilter | None = None
) -> list[FlowRow]:
    """Aggregate edge findings into source-group/relationship/target-group rows.

    Rows partition the matching edges' findings, so the counts always sum to
    the matching edge weights.  Ordered by count descending, then group ids.
    """
    if group_by not in ("node", "thematic_cluster"):
        raise ApiError("invalid-request", f"unknown group_by: {group_by!r}")
    flow_filter = flow_filter or FlowFilter()
    if flow_filter.cluster is not None:
        known = {c["id"] for c in graph.clusters}
        if flow_filter.cluster not in known:
            raise ApiError("unknown-cluster", f"unknown cluster id: {flow_filter.cluster!r}")

    def group_of(node_id: str) -> str:
        node = graph.nodes[node_id]
        if group_by == "node":
            return node_id
        return node.thematic_cluster or f"unclustered-{node.entity_type}"

    rows: dict[tuple[str, str, str], dict[str, Any]] = {}
    for edge in graph.edges:
        source = graph.nodes[edge.source]
        target = graph.nodes[edge.target]
        if flow_filter.cause_type and source.entity_type != flow_filter.cause_type:
            continue
        if flow_filter.effect_type and target.entity_type != flow_filter.effect_type:
            continue
        if flow_filter.cluster and flow_filter.cluster not in (
            source.thematic_cluster,
            target.thematic_cluster,
        ):
            continue
        key = (group_of(edge.source), edge.relationship, group_of(edge.target))
        row = rows.setdefault(key, {"count": 0, "findings": []})
        row["count"] += edge.weight
        row["findings"].extend(edge.findings)

    result = [
        FlowRow(
            source_group=source,
            relationship=relationship,
            target_group=target,
            count=row["count"],
            sample_findings=tuple(
                sorted(row["findings"], key=lambda f: (f["paper_id"], f["finding_ref"]))[
                    :FLOW_SAMPLE_CAP
                ]
            ),
        )
        for (source, relationship, target), row in rows.items()
    ]
    result.sort(key=lambda r: (-r.count, r.source_group, r.relationship, r.target_group))
    return result


# ---------------------------------------------------------------------------
# search

@dataclass
class SearchIndex:
    node_tokens: dict[str, list[str]] = field(default_factory=dict)
    paper_tokens: dict[str, list[str]] = field(default_factory=dict)

    @classmethod
    def build(cls, graph: AtlasGraph, papers: Sequence[Mapping[str, Any]]) -> "SearchIndex":
        index = cls()
        for node in graph.nodes.values():
            index.node_tokens[node.id] = tokenize(node.id) + tokenize(node.label)
        for paper in papers:
            index.paper_tokens[paper["id"]] = tokenize(paper["title"]) + tokenize(
                paper.get("abstract", "")
            )
        return index


def search(index: SearchIndex, query: str) -> dict[str, list[dict[str, Any]]]:
    """Case-insensitive token match over nodes and papers.

    Rank is the number of (query token, document token) matches; ties break
    by id.  An empty query is an invalid request.
    """
    terms = tokenize(query)
    if not terms:
        raise ApiError("invalid-request", "search query must be non-empty")

    def rank(tokens: Iterable[str]) -> int:
        counts: dict[str, int] = {}
        for token in tokens:
            counts[token] = counts.get(token, 0) + 1
        return sum(counts.get(term, 0) for term in terms)

    nodes = [
        {"id": node_id, "score": score}
        for node_id, tokens in index.node_tokens.items()
        if (score := rank(tokens)) > 0
    ]
    papers = [
        {"id": paper_id, "score": score}
        for paper_id, tokens in index.paper_tokens.items()
        if (score := rank(tokens)) > 0
    ]
    nodes.sort(key=lambda r: (-r["score"], r["id"]))
    papers.sort(key=lambda r: (-r["score"], r["id"]))
    return {"nodes": nodes, "papers": papers}


# ---------------------------------------------------------------------------
# snapshot

@dataclass
class Snapshot:
    graph: AtlasGraph
    analysis: dict[str, Any]
    papers: dict[str, dict[str, Any]]
    findings: dict[str, list[dict[str, Any]]]
    notes: dict[str, dict[str, Any]]
    index: SearchIndex
    edges_by_id: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def load(cls, paths: "SnapshotPaths") -> "Snapshot":
        graph = load_graph(paths.graph)
        analysis = json.loads(Path(paths.analysis).read_text(encoding="utf-8"))
        papers = {row["id"]: row for row in read_jsonl(paths.corpus)}
        findings: dict[str, list[dict[str, Any]]] = {}
        if paths.findings and Path(paths.findings).exists():
            for row in read_jsonl(paths.findings):
                findings.setdefault(row["paper_id"], []).append(row)
        notes: dict[str, dict[str, Any]] = {}
        if paths.notes and Path(paths.notes).exists():
            notes = {row["paper_id"]: row for row in read_jsonl(paths.notes)}
        return cls(
            graph=graph,
            analysis=analysis,
            papers=papers,
            findings=findings,
            notes=notes,
            index=SearchIndex.build(graph, list(papers.values())),
            edges_by_id={edge.id: edge for edge in graph.edges},
        )


@dataclass(frozen=True)
class SnapshotPaths:
    graph: str
    analysis: str
    corpus: str
    findings: str | None = None
    notes: str | None = None

    @classmethod
    def in_dir(cls, directory: str | Path) -> "SnapshotPaths":
        directory = Path(directory)
        return cls(
            graph=str(directory / "atlas.json"),
            analysis=str(directory / "analysis.json"),
            corpus=str(directory / "corpus.jsonl"),
            findings=str(directory / "findings.jsonl"),
            notes=str(directory / "notes.jsonl"),
        )


def encode_cursor(offset: int) -> str:
    return base64.urlsafe_b64encode(json.dumps({"o": offset}).encode()).decode()


def decode_cursor(cursor: str | None) -> int:
    if not cursor:
        return 0
    try:
        payload = json.loads(base64.urlsafe_b64decode(cursor.encode()))
        offset = int(payload["o"])
        if offset < 0:
            raise ValueError
        return offset
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise ApiError("invalid-cursor", "malformed pagination cursor") from exc


def paginate(items: list[Any], cursor: str | None, limit: int) -> dict[str, Any]:
    offset = decode_cursor(cursor)
    page = items[offset : offset + limit]
    next_cursor = encode_cursor(offset + limit) if offset + limit < len(items) else None
    return {"items": page, "total": len(items), "next_cursor": next_cursor}


# ---------------------------------------------------------------------------
# FastAPI app

def create_app(
    paths: SnapshotPaths,
    admin_token: str | None = None,
    page_size: int = 100,
    frontend_dir: str | None = None,
):
    from fastapi import FastAPI, Header, Query, Request
    from fastapi.middleware.cors import CORSMiddleware
    from fastapi.responses import JSONResponse

    app = FastAPI(title="atlas", docs_url=None, redoc_url=None)
    # Read-only public API; the exploration client may be hosted anywhere.
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["GET"], allow_headers=["*"]
    )
    app.state.snapshot = Snapshot.load(paths)
    app.state.paths = paths
    app.state.admin_token = admin_token

    @app.exception_handler(ApiError)
    async def handle_api_error(_request: Request, exc: ApiError) -> JSONResponse:
        return JSONResponse(
            status_code=exc.status, content={"code": exc.code, "message": exc.message}
        )

    def snapshot() -> Snapshot:
        return app.state.snapshot

    @app.get("/api/graph")
    def get_graph(
        cluster: str | None = None, type: str | None = None, q: str | None = None
    ) -> dict[str, Any]:
        snap = snapshot()
        nodes = list(snap.graph.nodes.values())
        description = []
        if cluster is not None:
            known = {c["id"] for c in snap.graph.clusters}
            if cluster not in known:
                raise ApiError("unknown-cluster", f"unknown cluster id: {cluster!r}")
            nodes = [n for n in nodes if n.thematic_cluster == cluster]
            description.append(f"cluster={cluster}")
        if type is not None:
            nodes = [n for n in nodes if n.entity_type == type]
            description.append(f"type={type}")
        if q:
            terms = tokenize(q)
            nodes = [
                n
                for n in nodes
                if any(t in tokenize(n.id) + tokenize(n.label) for t in terms)
            ]
            description.append(f"q={q}")
        keep = {n.id for n in nodes}
        edges = [
            e.to_document()
            for e in snap.graph.edges
            if e.source in keep and e.target in keep
        ]
        return {
            "meta": snap.graph.to_document()["meta"],
            "nodes": [n.to_document() for n in sorted(nodes, key=lambda n: n.id)],
            "edges": edges,
            "clusters": snap.graph.clusters,
            "applied_filter": "; ".join(description) or "none",
        }

    @app.get("/api/nodes/{node_id:path}/neighbors")
    def get_neighbors(node_id: str) -> dict[str, Any]:
        snap = snapshot()
        if node_id not in snap.graph.nodes:
            raise ApiError("not-found", f"unknown node: {node_id!r}", status=404)
        incident = [
            e for e in snap.graph.edges if node_id in (e.source, e.target)
        ]
        neighbor_ids = sorted(
            ({e.source for e in incident} | {e.target for e in incident}) - {node_id}
        )
        return {
            "node": snap.graph.nodes[node_id].to_document(),
            "neighbors": [snap.graph.nodes[n].to_document() for n in neighbor_ids],
            "edges": [e.to_document() for e in incident],
        }

    @app.get("/api/nodes/{node_id:path}")
    def get_node(node_id: str) -> dict[str, Any]:
        snap = snapshot()
        node = snap.graph.nodes.get(node_id)
        if node is None:
            raise ApiError("not-found", f"unknown node: {node_id!r}", status=404)
        metrics = next(
            (m for m in snap.analysis.get("metrics", []) if m["node_id"] == node_id), None
        )
        return {"node": node.to_document(), "metrics": metrics}

    @app.get("/api/edges")
    def get_edges(
        cause: str | None = None,
        effect: str | None = None,
        cursor: str | None = None,
        limit: int = Query(default=page_size, ge=1, le=1000),
    ) -> dict[str, Any]:
        snap = snapshot()
        edges = snap.graph.edges
        if cause is not None:
            edges = [e for e in edges if e.source == cause]
        if effect is not None:
            edges = [e for e in edges if e.target == effect]
        ordered = sorted(edges, key=lambda e: e.id)
        page = paginate(ordered, cursor, limit)
        page["items"] = [e.to_document() for e in page["items"]]
        return page

    @app.get("/api/flows")
    def get_flows(
        group_by: str = "thematic_cluster",
        cause_type: str | None = None,
        effect_type: str | None = None,
        cluster: str | None = None,
        cursor: str | None = None,
        limit: int = Query(default=page_size, ge=1, le=1000),
    ) -> dict[str, Any]:
        snap = snapshot()
        rows = aggregate_flows(
            snap.graph,
            group_by=group_by,
            flow_filter=FlowFilter(
                cause_type=cause_type, effect_type=effect_type, cluster=cluster
            ),
        )
        page = paginate(rows, cursor, limit)
        page["items"] = [r.to_document() for r in page["items"]]
        page["total_count"] = sum(r.count for r in rows)
        return page

    @app.get("/api/papers/{paper_id:path}")
    def get_paper(paper_id: str) -> dict[str, Any]:
        snap = snapshot()
        paper = snap.papers.get(paper_id)
        if paper is None:
            raise ApiError("not-found", f"unknown paper: {paper_id!r}", status=404)
        edge_ids = sorted(
            e.id
            for e in snap.graph.edges
            if any(f["paper_id"] == paper_id for f in e.findings)
        )
        return {
            "paper": paper,
            "findings": snap.findings.get(paper_id, []),
            "note": snap.notes.get(paper_id),
            "edge_ids": edge_ids,
        }

    @app.get("/api/papers")
    def list_papers(
        cursor: str | None = None,
        limit: int = Query(default=page_size, ge=1, le=1000),
    ) -> dict[str, Any]:
        snap = snapshot()
        ordered = [snap.papers[pid] for pid in sorted(snap.papers)]
        return paginate(ordered, cursor, limit)

    @app.get("/api/search")
    def get_search(q: str = "") -> dict[str, Any]:
        return search(snapshot().index, q)

    @app.get("/api/clusters")
    def get_clusters() -> dict[str, Any]:
        return {"clusters": snapshot().graph.clusters}

    @app.get("/api/analysis")
    def get_analysis() -> dict[str, Any]:
        return snapshot().analysis

    @app.get("/api/stats")
    def get_stats() -> dict[str, Any]:
        snap = snapshot()
        return {
            "schema_version": SCHEMA_VERSION,
            "nodes": len(snap.graph.nodes),
            "edges": len(snap.graph.edges),
            "findings": sum(e.weight for e in snap.graph.edges),
            "papers": len(snap.papers),
            "clusters": len(snap.graph.clusters),
            "communities": snap.analysis.get("summary", {}).get("num_communities"),
            "modularity": snap.analysis.get("summary", {}).get("modularity"),
        }

    @app.post("/api/reload")
    def reload(x_atlas_admin_token: str | None = Header(default=None)) -> dict[str, Any]:
        if app.state.admin_token is None or x_atlas_admin_token != app.state.admin_token:
            raise ApiError("unauthorized", "missing or invalid admin token", status=401)
        app.state.snapshot = Snapshot.load(app.state.paths)  # atomic swap
        return {"reloaded": True, "nodes": len(app.state.snapshot.graph.nodes)}

    if frontend_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="frontend")

    return app
