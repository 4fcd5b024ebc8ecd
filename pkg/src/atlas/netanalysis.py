"""Community structure and structural-hole analytics over the atlas graph.

All measures run on the undirected weighted projection of the graph: directed
multiplicities between a node pair are summed into one undirected weight and
self-loops are dropped (constraint is undefined over self-ties).  Within the
projection:

- modularity of a partition:  Q = sum_c ( w_c / W - (s_c / 2W)^2 )  with
  w_c the intra-community weight, s_c the community's summed node strength,
  and W the total edge weight;
- betweenness is shortest-path betweenness over unweighted paths,
  normalized by (n-1)(n-2)/2;
- Burt constraint:  C_i = sum_{j in N(i)} (p_ij + sum_q p_iq * p_qj)^2
  with p_ij = w_ij / sum_k w_ik;
- effective size follows Burt's redundancy discount and reduces to
  degree - 2t/degree on unweighted graphs;
- the structural-hole composite is effective_size * betweenness / constraint
  (ranking score; magnitudes are artifact-defined).

Louvain sweeps nodes in a seeded shuffle of canonical id order per level and
keeps refining while some move improves modularity by more than 1e-9, so a
fixed seed yields a stable partition.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass
from typing import Any, Iterable, Mapping

from .canonical import canonical_json_bytes
from .graph import AtlasGraph

GAIN_TOLERANCE = 1e-9

Adjacency = dict[str, dict[str, float]]


def undirected_projection(graph: AtlasGraph) -> Adjacency:
    """Sum directed edge weights per node pair; self-loops excluded."""
    adjacency: Adjacency = {node_id: {} for node_id in graph.nodes}
    for edge in graph.edges:
        if edge.source == edge.target:
            continue
        adjacency[edge.source][edge.target] = (
            adjacency[edge.source].get(edge.target, 0.0) + edge.weight
        )
        adjacency[edge.target][edge.source] = (
            adjacency[edge.target].get(edge.source, 0.0) + edge.weight
        )
    return adjacency


def adjacency_from_edges(
    edges: Iterable[tuple[str, str]] | Iterable[tuple[str, str, float]],
    nodes: Iterable[str] = (),
) -> Adjacency:
    """Build a projection directly from (u, v[, weight]) pairs; for tests/demos."""
    adjacency: Adjacency = {node: {} for node in nodes}
    for edge in edges:
        u, v = edge[0], edge[1]
        w = float(edge[2]) if len(edge) > 2 else 1.0
        if u == v:
            continue
        adjacency.setdefault(u, {})
        adjacency.setdefault(v, {})
        adjacency[u][v] = adjacency[u].get(v, 0.0) + w
        adjacency[v][u] = adjacency[v].get(u, 0.0) + w
    return adjacency


def total_weight(adjacency: Adjacency) -> float:
    return sum(sum(neighbors.values()) for neighbors in adjacency.values()) / 2.0


@dataclass(frozen=True)
class CommunityPartition:
    assignment: Mapping[str, int]
    num_communities: int
    modularity: float


@dataclass(frozen=True)
class NodeMetrics:
    node_id: str
    community: int
    degree: int
    betweenness: float
    constraint: float | None
    effective_size: float | None
    structural_hole_score: float | None


@dataclass(frozen=True)
class BridgeReport:
    node_id: str
    home_community: int
    num_external_communities: int
    degree: int
    betweenness: float


@dataclass(frozen=True)
class AnalysisSummary:
    num_communities: int
    modularity: float
    constraint_mean: float | None
    constraint_std: float | None


def modularity(adjacency: Adjacency, assignment: Mapping[str, int]) -> float:
    """Modularity Q of a partition; 0 for a graph without edges."""
    for node in adjacency:
        if node not in assignment:
            raise ValueError(f"partition does not cover node {node!r}")
    w_total = total_weight(adjacency)
    if w_total == 0:
        return 0.0
    intra: dict[int, float] = {}
    strengths: dict[int, float] = {}
    for node, neighbors in adjacency.items():
        community = assignment[node]
        strengths[community] = strengths.get(community, 0.0) + sum(neighbors.values())
        for neighbor, weight in neighbors.items():
            if assignment[neighbor] == community and node < neighbor:
                intra[community] = intra.get(community, 0.0) + weight
    return sum(
        intra.get(c, 0.0) / w_total - (strengths[c] / (2.0 * w_total)) ** 2
        for c in strengths
    )


# ---------------------------------------------------------------------------
# Louvain

def _level_strength(adjacency: Adjacency, node: str) -> float:
    # Self-loops (which appear on aggregated levels) count twice.
    return sum(w * (2.0 if v == node else 1.0) for v, w in adjacency[node].items())


def _local_moves_sweep(
    adjacency: Adjacency,
    assignment: dict[str, int],
    community_strength: dict[int, float],
    two_m: float,
    order: list[str],
    isolate_labels: dict[str, int] | None = None,
) -> bool:
    """One greedy sweep of single-node moves; True if anything moved.

    The per-node gain of joining community C (with the node lifted out) is
    links(C) - strength(C) * k_i / 2m, which orders candidates identically
    to the modularity delta.  Moves happen only on gains above the shared
    tolerance, ties go to the smaller community id.  When ``isolate_labels``
    is given, splitting off into a reserved fresh community (score 0) is a
    candidate move as well.
    """
    moved = False
    for node in order:
        k_i = _level_strength(adjacency, node)
        home = assignment[node]
        community_strength[home] -= k_i

        links: dict[int, float] = {home: 0.0}
        for neighbor, weight in adjacency[node].items():
            if neighbor == node:
                continue
            community = assignment[neighbor]
            links[community] = links.get(community, 0.0) + weight

        def score(community: int) -> float:
            return links[community] - community_strength.get(community, 0.0) * k_i / two_m

        best, best_score = home, score(home)
        if isolate_labels is not None and 0.0 > best_score + GAIN_TOLERANCE:
            best, best_score = isolate_labels[node], 0.0
        for community in sorted(links):
            if community == home:
                continue
            gain = score(community)
            if gain > best_score + GAIN_TOLERANCE:
                best, best_score = community, gain
        community_strength[best] = community_strength.get(best, 0.0) + k_i
        if best != home:
            assignment[node] = best
            moved = True
    return moved


def _aggregate(
    adjacency: Adjacency, assignment: Mapping[str, int]
) -> tuple[Adjacency, dict[str, str]]:
    """Collapse communities into supernodes; intra weight becomes a self-loop."""
    labels = sorted(set(assignment.values()))
    relabel = {old: str(new) for new, old in enumerate(labels)}
    aggregated: Adjacency = {relabel[c]: {} for c in labels}
    for node, neighbors in adjacency.items():
        cu = relabel[assignment[node]]
        for neighbor, weight in neighbors.items():
            if neighbor < node:
                continue  # count each undirected pair (and self-loop) once
            cv = relabel[assignment[neighbor]]
            if cu == cv:
                aggregated[cu][cu] = aggregated[cu].get(cu, 0.0) + weight
            else:
                aggregated[cu][cv] = aggregated[cu].get(cv, 0.0) + weight
                aggregated[cv][cu] = aggregated[cv].get(cu, 0.0) + weight
    mapping = {node: relabel[assignment[node]] for node in assignment}
    return aggregated, mapping


def _louvain_once(adjacency: Adjacency, seed: int, random_init: bool) -> dict[str, int]:
    nodes = sorted(adjacency)
    rng = random.Random(seed)
    flat = {node: node for node in nodes}  # original node -> current supernode
    level_graph: Adjacency = {u: dict(neighbors) for u, neighbors in adjacency.items()}
    first_level = True

    while True:
        level_nodes = sorted(level_graph)
        if first_level and random_init and len(level_nodes) > 2:
            # Random coarse start: escapes the pairing optima that greedy
            # growth from singletons falls into on sparse graphs.
            k = rng.randint(1, len(level_nodes) // 2)
            assignment = {node: rng.randrange(k) for node in level_nodes}
        else:
            assignment = {node: i for i, node in enumerate(level_nodes)}
        first_level = False

        community_strength: dict[int, float] = {}
        for node in level_nodes:
            community_strength[assignment[node]] = community_strength.get(
                assignment[node], 0.0
            ) + _level_strength(level_graph, node)
        two_m = sum(_level_strength(level_graph, node) for node in level_nodes)
        isolate_labels = {
            node: len(level_nodes) + i for i, node in enumerate(level_nodes)
        }

        order = list(level_nodes)
        rng.shuffle(order)
        while _local_moves_sweep(
            level_graph, assignment, community_strength, two_m, order, isolate_labels
        ):
            pass
        if len(set(assignment.values())) == len(level_nodes):
            break  # no coarsening left at this level
        level_graph, mapping = _aggregate(level_graph, assignment)
        flat = {node: mapping[flat[node]] for node in flat}

    assignment = _relabel({node: flat[node] for node in nodes})

    # Refinement: re-run single-node moves on the original graph starting
    # from the flat partition, with isolation moves allowed, to undo merges
    # the aggregation locked in.
    community_strength: dict[int, float] = {}
    for node in nodes:
        community_strength[assignment[node]] = community_strength.get(
            assignment[node], 0.0
        ) + _level_strength(adjacency, node)
    two_m = sum(community_strength.values())
    isolate_labels = {
        node: max(assignment.values()) + 1 + i for i, node in enumerate(nodes)
    }
    order = list(nodes)
    rng.shuffle(order)
    while _local_moves_sweep(
        adjacency, assignment, community_strength, two_m, order, isolate_labels
    ):
        pass
    return _relabel(assignment)


def _relabel(assignment: Mapping[str, int]) -> dict[str, int]:
    """Relabel communities 0..k-1 ordered by their smallest member id."""
    members: dict[int, list[str]] = {}
    for node, community in assignment.items():
        members.setdefault(community, []).append(node)
    ordered = sorted(members.values(), key=min)
    return {node: i for i, group in enumerate(ordered) for node in group}


def louvain(adjacency: Adjacency, seed: int = 0, restarts: int = 16) -> CommunityPartition:
    """Louvain community detection, deterministic for a fixed seed.

    Nodes sweep in a seeded shuffle of canonical id order, reshuffled per
    level; sweeps repeat until no move improves modularity by more than the
    tolerance, then communities aggregate into the next level, finishing
    with a flat refinement pass over the original graph.  The sweep order is
    a local-optimum lottery, so the run restarts with derived seeds (even
    restarts grow from singletons, odd ones from a random coarse partition)
    and the best partition by modularity wins, first winner on ties.
    Community ids are relabeled 0..k-1 by smallest member id.
    """
    nodes = sorted(adjacency)
    if not nodes:
        return CommunityPartition(assignment={}, num_communities=0, modularity=0.0)
    if total_weight(adjacency) == 0:
        assignment = {node: i for i, node in enumerate(nodes)}
        return CommunityPartition(assignment, len(nodes), 0.0)

    best: dict[str, int] | None = None
    best_q = -math.inf
    for restart in range(max(1, restarts)):
        candidate = _louvain_once(
            adjacency, seed * 1_000_003 + restart, random_init=restart % 2 == 1
        )
        q = modularity(adjacency, candidate)
        if q > best_q + GAIN_TOLERANCE:
            best, best_q = candidate, q
    assert best is not None
    return CommunityPartition(
        assignment=best,
        num_communities=len(set(best.values())),
        modularity=best_q,
    )


# ---------------------------------------------------------------------------
# centrality and structural holes

def betweenness(adjacency: Adjacency) -> dict[str, float]:
    """Brandes shortest-path betweenness, unweighted, normalized to [0, 1]."""
    nodes = sorted(adjacency)
    n = len(nodes)
    centrality = {node: 0.0 for node in nodes}
    for source in nodes:
        stack: list[str] = []
        predecessors: dict[str, list[str]] = {node: [] for node in nodes}
        sigma = {node: 0.0 for node in nodes}
        sigma[source] = 1.0
        distance = {node: -1 for node in nodes}
        distance[source] = 0
        queue = deque([source])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for w in sorted(adjacency[v]):
                if distance[w] < 0:
                    queue.append(w)
                    distance[w] = distance[v] + 1
                if distance[w] == distance[v] + 1:
                    sigma[w] += sigma[v]
                    predecessors[w].append(v)
        dependency = {node: 0.0 for node in nodes}
        while stack:
            w = stack.pop()
            for v in predecessors[w]:
                dependency[v] += (sigma[v] / sigma[w]) * (1.0 + dependency[w])
            if w != source:
                centrality[w] += dependency[w]
    if n > 2:
        scale = 1.0 / ((n - 1) * (n - 2))  # halve double counting, then (n-1)(n-2)/2
        for node in centrality:
            centrality[node] *= scale
    else:
        centrality = {node: 0.0 for node in nodes}
    return centrality


def _proportions(adjacency: Adjacency, node: str) -> dict[str, float]:
    neighbors = adjacency[node]
    denom = sum(neighbors.values())
    return {v: w / denom for v, w in neighbors.items()}


def burt_constraint(adjacency: Adjacency, node: str) -> float:
    """Burt's constraint; undefined (raises) for isolated nodes."""
    if not adjacency.get(node):
        raise ValueError(f"constraint undefined for isolated node {node!r}")
    p_i = _proportions(adjacency, node)
    p_of = {q: _proportions(adjacency, q) for q in p_i}
    constraint = 0.0
    for j in p_i:
        indirect = sum(p_i[q] * p_of[q].get(j, 0.0) for q in p_i if q != j)
        constraint += (p_i[j] + indirect) ** 2
    return constraint


def effective_size(adjacency: Adjacency, node: str) -> float:
    """Burt effective size; equals degree - 2t/degree on unweighted graphs."""
    if not adjacency.get(node):
        raise ValueError(f"effective size undefined for isolated node {node!r}")
    p_i = _proportions(adjacency, node)
    total = 0.0
    for j in adjacency[node]:
        max_j = max(adjacency[j].values())
        redundancy = sum(
            p_i[q] * (adjacency[j].get(q, 0.0) / max_j) for q in p_i if q != j
        )
        total += 1.0 - redundancy
    return total


def structural_hole_score(
    constraint: float, betweenness_value: float, effective_size_value: float
) -> float:
    """Composite brokerage score: effective_size * betweenness / constraint."""
    if constraint <= 0:
        raise ValueError("structural hole score undefined for non-positive constraint")
    return effective_size_value * betweenness_value / constraint


def compute_node_metrics(
    adjacency: Adjacency,
    partition: CommunityPartition,
    betweenness_map: Mapping[str, float],
) -> list[NodeMetrics]:
    metrics: list[NodeMetrics] = []
    for node in sorted(adjacency):
        degree = len(adjacency[node])
        if degree:
            constraint = burt_constraint(adjacency, node)
            eff = effective_size(adjacency, node)
            score = structural_hole_score(constraint, betweenness_map[node], eff)
        else:
            constraint = eff = score = None
        metrics.append(
            NodeMetrics(
                node_id=node,
                community=partition.assignment[node],
                degree=degree,
                betweenness=betweenness_map[node],
                constraint=constraint,
                effective_size=eff,
                structural_hole_score=score,
            )
        )
    return metrics


def active_bridges(
    adjacency: Adjacency,
    partition: CommunityPartition,
    betweenness_map: Mapping[str, float],
) -> list[BridgeReport]:
    """Nodes ranked by how many foreign communities their edges reach."""
    reports = []
    for node in sorted(adjacency):
        home = partition.assignment[node]
        external = {
            partition.assignment[neighbor]
            for neighbor in adjacency[node]
            if partition.assignment[neighbor] != home
        }
        reports.append(
            BridgeReport(
                node_id=node,
                home_community=home,
                num_external_communities=len(external),
                degree=len(adjacency[node]),
                betweenness=betweenness_map[node],
            )
        )
    reports.sort(key=lambda r: (-r.num_external_communities, -r.betweenness, r.node_id))
    return reports


def summarize(
    partition: CommunityPartition, metrics: Iterable[NodeMetrics]
) -> AnalysisSummary:
    constraints = [m.constraint for m in metrics if m.constraint is not None]
    if constraints:
        mean = sum(constraints) / len(constraints)
        variance = sum((c - mean) ** 2 for c in constraints) / len(constraints)
        std = math.sqrt(variance)
    else:
        mean = std = None
    return AnalysisSummary(
        num_communities=partition.num_communities,
        modularity=partition.modularity,
        constraint_mean=mean,
        constraint_std=std,
    )


# ---------------------------------------------------------------------------
# full analysis document

ANALYSIS_SCHEMA_VERSION = "atlas-analysis/1"


def analyze_graph(graph: AtlasGraph, seed: int = 0) -> dict[str, Any]:
    """Run the full analysis and return the canonical analysis document."""
    adjacency = undirected_projection(graph)
    partition = louvain(adjacency, seed=seed)
    betweenness_map = betweenness(adjacency)
    metrics = compute_node_metrics(adjacency, partition, betweenness_map)
    bridges = active_bridges(adjacency, partition, betweenness_map)
    summary = summarize(partition, metrics)
    return {
        "meta": {
            "schema_version": ANALYSIS_SCHEMA_VERSION,
            "seed": seed,
            "graph_schema_version": graph.build_config.get("schema_version"),
        },
        "partition": {
            "assignment": {node: partition.assignment[node] for node in sorted(adjacency)},
            "num_communities": partition.num_communities,
            "modularity": partition.modularity,
        },
        "metrics": [
            {
                "node_id": m.node_id,
                "community": m.community,
                "degree": m.degree,
                "betweenness": m.betweenness,
                "constraint": m.constraint,
                "effective_size": m.effective_size,
                "structural_hole_score": m.structural_hole_score,
            }
            for m in metrics
        ],
        "bridges": [
            {
                "node_id": b.node_id,
                "home_community": b.home_community,
                "num_external_communities": b.num_external_communities,
                "degree": b.degree,
                "betweenness": b.betweenness,
            }
            for b in bridges
        ],
        "summary": {
            "num_communities": summary.num_communities,
            "modularity": summary.modularity,
            "constraint_mean": summary.constraint_mean,
            "constraint_std": summary.constraint_std,
        },
    }


def export_analysis(document: dict[str, Any]) -> bytes:
    return canonical_json_bytes(document)


def render_tables(document: dict[str, Any], top_k: int = 20) -> str:
    """Aligned-text tables for the top spanners and top bridges."""
    metric_rows = [m for m in document["metrics"] if m["structural_hole_score"] is not None]
    metric_rows.sort(key=lambda m: (-m["structural_hole_score"], m["node_id"]))
    lines = [f"Top {top_k} nodes spanning structural holes"]
    header = ("node", "community", "constraint", "betweenness", "effective_size", "score")
    rows = [header] + [
        (
            m["node_id"],
            str(m["community"]),
            f"{m['constraint']:.6f}",
            f"{m['betweenness']:.6f}",
            f"{m['effective_size']:.6f}",
            f"{m['structural_hole_score']:.6f}",
        )
        for m in metric_rows[:top_k]
    ]
    lines.extend(_align(rows))
    lines.append("")
    lines.append(f"Top {top_k} community bridges")
    header = ("node", "home_community", "num_external_communities", "degree", "betweenness")
    rows = [header] + [
        (
            b["node_id"],
            str(b["home_community"]),
            str(b["num_external_communities"]),
            str(b["degree"]),
            f"{b['betweenness']:.6f}",
        )
        for b in document["bridges"][:top_k]
    ]
    lines.extend(_align(rows))
    return "\n".join(lines) + "\n"


def _align(rows: list[tuple[str, ...]]) -> list[str]:
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    return ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)) for row in rows]
