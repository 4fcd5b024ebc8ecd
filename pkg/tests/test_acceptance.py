"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line (run with ``pytest tests/test_acceptance.py -v -s``).

Expected values come from independent oracles computed in-test (brute-force
density reachability, path enumeration, exhaustive partition search) or from
closed-form hand calculations; nothing is compared against the implementation
it checks.
"""

from __future__ import annotations

import json
import math
import random
import time

import numpy as np
import pytest

from atlas.netanalysis import (
    adjacency_from_edges,
    betweenness,
    burt_constraint,
    effective_size,
    louvain,
    modularity,
    structural_hole_score,
)
from atlas.notation import EntityKey, Segment, format_key, parse_key
from atlas.semantics import dbscan, kmeans, select_k, silhouette_score

from conftest import run_fixture_pipeline
from test_netanalysis import modularity_oracle, set_partitions
from test_semantics import dbscan_oracle


def _report(name: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {name}"
    if detail:
        line += f" ({detail})"
    print(line)
    assert ok, line


# Coding-scheme surface forms the pipeline must accept verbatim.
CODING_SCHEME_EXAMPLES = [
    "human:student(medical)>trust(ai)",
    "human:perception_of_trust",
    "human:#trust",
    "human:expert>knowledge",
    "ai>performance",
    "ai:elder",
    "ai:elderly",
    "ai:gpt_4",
    "ai:gpt4",
    "ai:gpt_4o",
    "ai:interpretability",
    "ai>interpretability",
    "ai:interpretable",
    "human:non_professional",
    "human:non_expert",
    "ai:teacher(2d)",
    "human:student>interaction(multidimensional)",
    "ai:llm(chains)",
    "human:user>#transparency",
    "ai:explainable>affective",
    "human>#trust",
    "ai:explanation>practical",
    "co:collaboration>human(ai)",
    "co:workshop>metaphor(crime)",
    "human:designer>identification(consequences)",
    "ai:co-creative>sketch(bidirectional)",
    "human:designer>experience",
    "ai:explanation",
    "ai:product>control",
    "co:inclusivity>problem-solving",
    "human:judgment>inconsistent",
    "co:loop>convergence",
    "ai:outcome",
    "human:input",
    "human:user",
    "human:participant",
    "human:student",
    "human:expert",
    "human:decision_maker",
    "human:blind",
    "human:autistic",
    "human:visually_impaired",
    "human:deaf",
    "human:vulnerable",
    "ai:chatbot",
    "ai:assistant",
    "ai:agent",
    "ai:translator",
    "ai:fact_checking",
    "ai:visual",
    "ai:ar",
    "ai:vr",
    "ai:xr",
    "ai:3d",
    "co:interface",
    "co:tool",
    "co:prototype",
    "co:framework",
    "co:customization",
    "co:training",
    "co:coaching",
    "co:skill",
    "co:learning",
    "co:assessment",
    "ai:interactive>interface",
    "human:artist>creativity(writing)",
    "ai>engagement",
    "human>#robot",
    "ai:llm>tutoring",
    "human:student(medical)>learning",
    "ai:chatgpt>explanation",
    "human:user>misconception(complex)",
    "co:collaboration>expert(ai)",
    "co:solution>novelty",
    "ai>assistance",
    "human:student>problem_solving",
    "human>reliance(ai)",
    "human>misconception(ai)",
]


def random_entity_key(rng: random.Random) -> EntityKey:
    def name() -> str:
        words = [
            "".join(rng.choices("abcdefghijklmnopqrstuvwxyz0123456789", k=rng.randint(1, 7)))
            for _ in range(rng.randint(1, 3))
        ]
        return "_".join(words)

    def segment(allow_perception: bool) -> Segment:
        return Segment(
            name=name(),
            specificity=name() if rng.random() < 0.4 else None,
            perception=allow_perception and rng.random() < 0.3,
        )

    entity_type = rng.choice(["human", "ai", "co"])
    has_subtype = rng.random() < 0.7
    has_feature = rng.random() < 0.7 if has_subtype else True
    return EntityKey(
        entity_type,
        segment(False) if has_subtype else None,
        segment(True) if has_feature else None,
    )


class TestAcceptance:
    def test_notation_round_trip(self):
        start = time.monotonic()
        rng = random.Random(20240901)
        failures = 0
        for _ in range(1000):
            key = random_entity_key(rng)
            if parse_key(format_key(key)) != key:
                failures += 1
        parse_failures = []
        for text in CODING_SCHEME_EXAMPLES:
            try:
                parse_key(text)
            except Exception:  # noqa: BLE001 - counted and reported below
                parse_failures.append(text)
        elapsed = time.monotonic() - start
        _report(
            "notation round-trip",
            failures == 0 and not parse_failures and elapsed < 1.0,
            f"1000 keys, {len(CODING_SCHEME_EXAMPLES)} coding-scheme examples, {elapsed:.2f}s",
        )

    def test_dbscan_oracle_equivalence(self):
        rng = np.random.default_rng(424242)
        mismatches = 0
        for _ in range(100):
            n = int(rng.integers(5, 201))
            d = int(rng.integers(2, 17))
            n_centers = max(1, n // 10)
            centers = rng.normal(size=(n_centers, d))
            points = centers[rng.integers(n_centers, size=n)] + rng.normal(
                scale=0.2, size=(n, d)
            )
            vectors = {f"k{i:03d}": points[i] for i in range(n)}
            eps = float(rng.uniform(0.05, 0.7))
            min_pts = int(rng.integers(2, 6))
            clusters, noise = dbscan(vectors, eps, min_pts)
            oracle_clusters, oracle_noise = dbscan_oracle(vectors, eps, min_pts)
            if {frozenset(c) for c in clusters} != oracle_clusters or set(noise) != oracle_noise:
                mismatches += 1
        _report(
            "dbscan brute-force equivalence",
            mismatches == 0,
            f"100 random vector sets, {mismatches} mismatches",
        )

    def test_clustering_two_blob_selection(self):
        successes = 0
        for seed in range(100):
            rng = np.random.default_rng(seed)
            vectors = {}
            for i in range(12):
                theta_a = math.radians(float(rng.normal(0, 3)))
                theta_b = math.radians(90 + float(rng.normal(0, 3)))
                vectors[f"a{i:02d}"] = np.array([math.cos(theta_a), math.sin(theta_a)])
                vectors[f"b{i:02d}"] = np.array([math.cos(theta_b), math.sin(theta_b)])
            chosen = select_k(vectors, (2, 6), seed=seed)
            result = kmeans(vectors, 2, seed=seed)
            history = result.objective_history
            assert all(
                history[i + 1] <= history[i] + 1e-9 for i in range(len(history) - 1)
            ), "k-means objective increased between iterations"
            score = silhouette_score(vectors, result.assignment)
            if chosen == 2 and score > 0.9:
                successes += 1
        _report(
            "two-blob clustering selection",
            successes >= 95,
            f"{successes}/100 seeds selected k=2 with silhouette > 0.9",
        )

    def test_burt_metrics_closed_forms(self):
        triangle = adjacency_from_edges([("a", "b"), ("b", "c"), ("a", "c")])
        star = adjacency_from_edges([("c", f"l{i}") for i in range(5)])
        clique = adjacency_from_edges(
            [(a, b) for i, a in enumerate("abcd") for b in "abcd"[i + 1 :]]
        )
        checks = [
            ("triangle constraint", burt_constraint(triangle, "a"), 1.125),
            ("triangle effective size", effective_size(triangle, "a"), 1.0),
            ("star center constraint", burt_constraint(star, "c"), 0.2),
            ("star center effective size", effective_size(star, "c"), 5.0),
            ("star leaf constraint", burt_constraint(star, "l0"), 1.0),
            ("star leaf effective size", effective_size(star, "l0"), 1.0),
            ("clique effective size", effective_size(clique, "a"), 1.0),
        ]
        bad = [name for name, got, want in checks if abs(got - want) > 1e-9]
        _report("burt constraint / effective size closed forms", not bad, ", ".join(bad) or "7 checks")

    def test_betweenness_oracle_and_closed_forms(self):
        from test_netanalysis import betweenness_oracle, random_graph

        path = betweenness(adjacency_from_edges([("a", "b"), ("b", "c")]))
        star = betweenness(adjacency_from_edges([("c", f"l{i}") for i in range(5)]))
        closed = (
            path["b"] == 1.0
            and path["a"] == 0.0
            and star["c"] == pytest.approx(1.0, abs=1e-12)
            and all(star[f"l{i}"] == 0.0 for i in range(5))
        )
        rng = random.Random(20240902)
        worst = 0.0
        for _ in range(100):
            nodes, edges = random_graph(rng)
            adjacency = adjacency_from_edges(edges, nodes=nodes)
            mine = betweenness(adjacency)
            oracle = betweenness_oracle(adjacency)
            worst = max(worst, max(abs(mine[n] - oracle[n]) for n in nodes))
        _report(
            "betweenness path-enumeration equivalence",
            closed and worst < 1e-9,
            f"100 random graphs, worst |delta| = {worst:.2e}",
        )

    def test_louvain_modularity(self):
        start = time.monotonic()
        twin = adjacency_from_edges(
            [("a", "b"), ("b", "c"), ("a", "c"), ("x", "y"), ("y", "z"), ("x", "z")]
        )
        split = {n: (0 if n in "abc" else 1) for n in twin}
        twin_exact = modularity(twin, split) == 0.5
        louvain_twin = louvain(twin, seed=0)
        twin_found = louvain_twin.num_communities == 2 and louvain_twin.modularity == 0.5

        rng = random.Random(20240903)
        worst_gap = 0.0
        for _ in range(100):
            n = rng.randint(4, 8)
            nodes = [f"n{i}" for i in range(n)]
            edges = [
                (nodes[i], nodes[j])
                for i in range(n)
                for j in range(i + 1, n)
                if rng.random() < 0.4
            ]
            adjacency = adjacency_from_edges(edges, nodes=nodes)
            partition = louvain(adjacency, seed=11)
            best = max(
                modularity_oracle(edges, nodes, assignment)
                for assignment in set_partitions(nodes)
            )
            worst_gap = max(worst_gap, best - partition.modularity)

        from conftest import FIXTURES

        lines = (FIXTURES / "karate_club.edgelist").read_text().splitlines()
        karate_edges = [tuple(line.split()) for line in lines if line.strip()]
        karate_nodes = sorted({v for e in karate_edges for v in e}, key=int)
        karate = louvain(adjacency_from_edges(karate_edges, nodes=karate_nodes), seed=7)
        elapsed = time.monotonic() - start
        _report(
            "louvain / modularity",
            twin_exact
            and twin_found
            and worst_gap <= 0.02
            and karate.modularity >= 0.40
            and elapsed < 10.0,
            f"twin Q exact, worst exhaustive gap {worst_gap:.4f}, "
            f"karate Q {karate.modularity:.4f}, {elapsed:.1f}s",
        )

    def test_structural_hole_ranking(self):
        reference_columns = [
            ("ai:llm", 0.010984, 0.150596, 94.312500),
            ("ai:generative", 0.015250, 0.133489, 65.784615),
            ("human>trust", 0.018284, 0.116269, 55.821429),
            ("ai:chatbot", 0.020830, 0.070510, 48.500000),
            ("ai:agent", 0.022660, 0.064660, 46.750000),
        ]
        scored = [
            (node, structural_hole_score(c, b, e)) for node, c, b, e in reference_columns
        ]
        ranked = [node for node, _ in sorted(scored, key=lambda pair: -pair[1])]
        expected = ["ai:llm", "ai:generative", "human>trust", "ai:chatbot", "ai:agent"]
        agreement = sum(1 for a, b in zip(ranked, expected) if a == b)
        _report(
            "structural-hole composite ranking",
            ranked == expected,
            f"{agreement}/5 order agreement",
        )

    def test_pipeline_replay_byte_identical(self, tmp_path):
        start = time.monotonic()
        first = run_fixture_pipeline(tmp_path / "run1")
        second = run_fixture_pipeline(tmp_path / "run2")
        elapsed = time.monotonic() - start
        graph_same = first["atlas.json"].read_bytes() == second["atlas.json"].read_bytes()
        analysis_same = (
            first["analysis.json"].read_bytes() == second["analysis.json"].read_bytes()
        )
        _report(
            "pipeline replay determinism",
            graph_same and analysis_same and elapsed < 30.0,
            f"two full replay runs in {elapsed:.1f}s, graph bytes equal: {graph_same}, "
            f"analysis bytes equal: {analysis_same}",
        )

    def test_graph_conservation(self, fixture_artifacts):
        graph_doc = json.loads(fixture_artifacts["atlas.json"].read_text())
        triplets = [
            json.loads(line)
            for line in fixture_artifacts["merged_triplets.jsonl"].read_text().splitlines()
            if line.strip()
        ]
        total_weight = sum(e["weight"] for e in graph_doc["edges"])
        placements: dict[tuple[str, str], int] = {}
        for edge in graph_doc["edges"]:
            for finding in edge["findings"]:
                key = (finding["paper_id"], finding["finding_ref"])
                placements[key] = placements.get(key, 0) + 1
        expected = {(t["paper_id"], t["finding_ref"]) for t in triplets}
        conserved = total_weight == len(triplets)
        exactly_once = set(placements) == expected and all(
            count == 1 for count in placements.values()
        )
        _report(
            "graph conservation",
            conserved and exactly_once,
            f"{total_weight} edge weight over {len(triplets)} accepted triplets, "
            f"each finding on exactly one edge: {exactly_once}",
        )
