import json
from urllib.parse import quote

import pytest

from atlas.graph import graph_from_document
from atlas.service import (
    ApiError,
    FlowFilter,
    SearchIndex,
    SnapshotPaths,
    aggregate_flows,
    create_app,
    search,
    tokenize,
)

fastapi_testclient = pytest.importorskip("fastapi.testclient")
TestClient = fastapi_testclient.TestClient


@pytest.fixture(scope="module")
def fixture_graph(fixture_graph_doc):
    return graph_from_document(fixture_graph_doc)


@pytest.fixture(scope="module")
def client(fixture_artifacts):
    paths = SnapshotPaths(
        graph=str(fixture_artifacts["atlas.json"]),
        analysis=str(fixture_artifacts["analysis.json"]),
        corpus=str(fixture_artifacts["corpus.jsonl"]),
        findings=str(fixture_artifacts["findings.jsonl"]),
        notes=str(fixture_artifacts["notes.jsonl"]),
    )
    app = create_app(paths, admin_token="fixture-admin", page_size=100)
    return TestClient(app)


class TestAggregateFlows:
    def test_empty_graph(self):
        from atlas.graph import build_graph

        assert aggregate_flows(build_graph([]), group_by="node") == []

    def test_counts_conserve_edge_weights(self, fixture_graph):
        rows = aggregate_flows(fixture_graph, group_by="thematic_cluster")
        assert sum(r.count for r in rows) == sum(e.weight for e in fixture_graph.edges)

    def test_group_refinement_preserves_totals(self, fixture_graph):
        cluster_rows = aggregate_flows(fixture_graph, group_by="thematic_cluster")
        node_rows = aggregate_flows(fixture_graph, group_by="node")
        assert sum(r.count for r in cluster_rows) == sum(r.count for r in node_rows)

    def test_same_group_pair_weights_summed(self, fixture_graph):
        # Two chatbot-explanation findings collapse into one weighted edge,
        # whose weight must survive grouping at node level.
        rows = aggregate_flows(fixture_graph, group_by="node")
        row = next(
            r
            for r in rows
            if r.source_group == "ai:chatbot>explanation" and r.target_group == "human>trust"
        )
        assert row.count == 2
        assert row.relationship == "INCREASES"
        assert len(row.sample_findings) == 2

    def test_cause_effect_type_filter(self, fixture_graph):
        rows = aggregate_flows(
            fixture_graph,
            group_by="node",
            flow_filter=FlowFilter(cause_type="ai", effect_type="human"),
        )
        assert rows
        for row in rows:
            assert fixture_graph.nodes[row.source_group].entity_type == "ai"
            assert fixture_graph.nodes[row.target_group].entity_type == "human"

    def test_unknown_cluster_rejected(self, fixture_graph):
        with pytest.raises(ApiError, match="unknown cluster"):
            aggregate_flows(fixture_graph, flow_filter=FlowFilter(cluster="ghost"))

    def test_rows_ordered_by_count_then_ids(self, fixture_graph):
        rows = aggregate_flows(fixture_graph, group_by="node")
        keys = [(-r.count, r.source_group, r.relationship, r.target_group) for r in rows]
        assert keys == sorted(keys)


class TestSearchFunction:
    def build_index(self, fixture_graph):
        papers = [
            {"id": "p1", "title": "Music therapy with AI", "abstract": "Generative music."},
            {"id": "p2", "title": "Trust in automation", "abstract": "A study of trust."},
        ]
        return SearchIndex.build(fixture_graph, papers)

    def test_empty_query_invalid(self, fixture_graph):
        with pytest.raises(ApiError, match="non-empty"):
            search(self.build_index(fixture_graph), "   ")

    def test_case_insensitive(self, fixture_graph):
        index = self.build_index(fixture_graph)
        assert search(index, "MUSIC") == search(index, "music")

    def test_rank_by_match_count_ties_by_id(self, fixture_graph):
        index = self.build_index(fixture_graph)
        result = search(index, "trust")
        papers = result["papers"]
        assert papers[0]["id"] == "p2" and papers[0]["score"] == 2

    def test_matches_linear_scan_oracle(self, fixture_graph):
        index = self.build_index(fixture_graph)
        result = search(index, "music generative")
        expected_nodes = []
        for node in fixture_graph.nodes.values():
            tokens = tokenize(node.id) + tokenize(node.label)
            score = tokens.count("music") + tokens.count("generative")
            if score:
                expected_nodes.append((node.id, score))
        expected_nodes.sort(key=lambda pair: (-pair[1], pair[0]))
        assert [(n["id"], n["score"]) for n in result["nodes"]] == expected_nodes


class TestEndpoints:
    def test_graph_endpoint_full(self, client, fixture_graph_doc):
        payload = client.get("/api/graph").json()
        assert len(payload["nodes"]) == len(fixture_graph_doc["nodes"])
        assert len(payload["edges"]) == len(fixture_graph_doc["edges"])
        assert payload["applied_filter"] == "none"

    def test_graph_slice_keeps_edges_inside_node_set(self, client):
        payload = client.get("/api/graph", params={"type": "ai"}).json()
        node_ids = {n["id"] for n in payload["nodes"]}
        assert node_ids
        for edge in payload["edges"]:
            assert edge["source"] in node_ids and edge["target"] in node_ids

    def test_graph_unknown_cluster_structured_error(self, client):
        response = client.get("/api/graph", params={"cluster": "ghost"})
        assert response.status_code == 400
        body = response.json()
        assert body["code"] == "unknown-cluster" and "message" in body

    def test_node_detail_and_neighbors(self, client):
        node_id = quote("human>trust", safe="")
        detail = client.get(f"/api/nodes/{node_id}").json()
        assert detail["node"]["id"] == "human>trust"
        assert detail["metrics"]["degree"] > 0
        neighbors = client.get(f"/api/nodes/{node_id}/neighbors").json()
        assert neighbors["edges"]
        assert all(
            "human>trust" in (e["source"], e["target"]) for e in neighbors["edges"]
        )
        assert all(n["id"] != "human>trust" for n in neighbors["neighbors"])

    def test_unknown_node_404(self, client):
        response = client.get("/api/nodes/" + quote("ai:ghost", safe=""))
        assert response.status_code == 404
        assert response.json()["code"] == "not-found"

    def test_edges_filter_by_cause_and_effect(self, client):
        payload = client.get(
            "/api/edges",
            params={"cause": "ai:chatbot>explanation", "effect": "human>trust"},
        ).json()
        assert payload["total"] == 1
        assert payload["items"][0]["weight"] == 2

    def test_flows_totals_match_graph(self, client, fixture_graph_doc):
        payload = client.get("/api/flows", params={"group_by": "node", "limit": 1000}).json()
        total_weight = sum(e["weight"] for e in fixture_graph_doc["edges"])
        assert payload["total_count"] == total_weight
        assert sum(r["count"] for r in payload["items"]) == total_weight

    def test_flows_pagination_cursor_walk(self, client):
        first = client.get("/api/flows", params={"group_by": "node", "limit": 5}).json()
        assert len(first["items"]) == 5
        seen = [json.dumps(r, sort_keys=True) for r in first["items"]]
        cursor = first["next_cursor"]
        while cursor:
            page = client.get(
                "/api/flows", params={"group_by": "node", "limit": 5, "cursor": cursor}
            ).json()
            seen.extend(json.dumps(r, sort_keys=True) for r in page["items"])
            cursor = page["next_cursor"]
        assert len(seen) == first["total"]
        assert len(set(seen)) == len(seen)

    def test_invalid_cursor_structured_error(self, client):
        response = client.get("/api/flows", params={"cursor": "!!notb64!!"})
        assert response.status_code == 400
        assert response.json()["code"] == "invalid-cursor"

    def test_paper_detail_links_findings_and_edges(self, client):
        paper_id = quote("10.9999/atlas.p01", safe="")
        payload = client.get(f"/api/papers/{paper_id}").json()
        assert payload["paper"]["title"].startswith("Chatbot explanations")
        assert len(payload["findings"]) == 1
        assert payload["edge_ids"]

    def test_paper_list_paginated(self, client):
        payload = client.get("/api/papers", params={"limit": 10}).json()
        assert payload["total"] == 25
        assert len(payload["items"]) == 10
        assert payload["next_cursor"]

    def test_search_endpoint_music_scenario(self, client):
        payload = client.get("/api/search", params={"q": "music"}).json()
        paper_ids = [p["id"] for p in payload["papers"]]
        assert "10.9999/atlas.p20" in paper_ids
        node_ids = [n["id"] for n in payload["nodes"]]
        assert "ai:generative>music" in node_ids and "co:codesign>music" in node_ids

    def test_search_empty_query_invalid_request(self, client):
        response = client.get("/api/search", params={"q": ""})
        assert response.status_code == 400
        assert response.json()["code"] == "invalid-request"

    def test_search_case_fold_equivalence(self, client):
        lower = client.get("/api/search", params={"q": "music"}).json()
        upper = client.get("/api/search", params={"q": "MUSIC"}).json()
        assert lower == upper

    def test_clusters_and_analysis(self, client, fixture_graph_doc):
        clusters = client.get("/api/clusters").json()["clusters"]
        assert len(clusters) == len(fixture_graph_doc["clusters"])
        analysis = client.get("/api/analysis").json()
        assert analysis["meta"]["schema_version"] == "atlas-analysis/1"
        assert set(analysis["partition"]["assignment"]) == {
            n["id"] for n in fixture_graph_doc["nodes"]
        }

    def test_stats(self, client, fixture_graph_doc):
        stats = client.get("/api/stats").json()
        assert stats["nodes"] == len(fixture_graph_doc["nodes"])
        assert stats["edges"] == len(fixture_graph_doc["edges"])
        assert stats["papers"] == 25
        assert stats["findings"] == sum(e["weight"] for e in fixture_graph_doc["edges"])

    def test_reload_requires_admin_token(self, client):
        denied = client.post("/api/reload")
        assert denied.status_code == 401
        assert denied.json()["code"] == "unauthorized"
        allowed = client.post("/api/reload", headers={"X-Atlas-Admin-Token": "fixture-admin"})
        assert allowed.status_code == 200
        assert allowed.json()["reloaded"] is True

    def test_responses_consistent_across_requests(self, client):
        # One immutable snapshot behind all reads.
        first = client.get("/api/stats").json()
        second = client.get("/api/stats").json()
        assert first == second

    def test_cors_allows_cross_origin_reads(self, client):
        response = client.get("/api/stats", headers={"Origin": "http://localhost:5173"})
        assert response.headers.get("access-control-allow-origin") == "*"


class TestFrontendHosting:
    def test_static_frontend_mounted_when_configured(self, fixture_artifacts, tmp_path):
        web_root = tmp_path / "web"
        web_root.mkdir()
        (web_root / "index.html").write_text("<!doctype html><title>atlas</title>")
        paths = SnapshotPaths(
            graph=str(fixture_artifacts["atlas.json"]),
            analysis=str(fixture_artifacts["analysis.json"]),
            corpus=str(fixture_artifacts["corpus.jsonl"]),
        )
        app = create_app(paths, frontend_dir=str(web_root))
        local = TestClient(app)
        assert local.get("/").status_code == 200
        assert "atlas" in local.get("/").text
        assert local.get("/api/stats").status_code == 200  # API still wins under /api
