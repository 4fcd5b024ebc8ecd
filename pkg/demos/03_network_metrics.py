#!/usr/bin/env python3
"""Community detection and structural-hole metrics on a classic small graph.

Uses the 34-node karate-club network bundled as test data: Louvain finds its
communities, then Burt's constraint and effective size identify the members
who broker between otherwise separate groups.
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from atlas.netanalysis import (
    active_bridges,
    adjacency_from_edges,
    betweenness,
    burt_constraint,
    effective_size,
    louvain,
    structural_hole_score,
)


def main() -> None:
    lines = (ROOT / "fixtures" / "karate_club.edgelist").read_text().splitlines()
    edges = [tuple(line.split()) for line in lines if line.strip()]
    nodes = sorted({n for e in edges for n in e}, key=int)
    adjacency = adjacency_from_edges(edges, nodes=nodes)
    print(f"{len(nodes)} nodes, {len(edges)} edges")

    partition = louvain(adjacency, seed=7)
    print(f"\nLouvain: {partition.num_communities} communities, Q = {partition.modularity:.4f}")
    members: dict[int, list[str]] = {}
    for node, community in partition.assignment.items():
        members.setdefault(community, []).append(node)
    for community, group in sorted(members.items()):
        print(f"  community {community}: {sorted(group, key=int)}")

    centrality = betweenness(adjacency)
    rows = []
    for node in nodes:
        constraint = burt_constraint(adjacency, node)
        eff = effective_size(adjacency, node)
        rows.append(
            (node, constraint, eff, structural_hole_score(constraint, centrality[node], eff))
        )
    rows.sort(key=lambda r: -r[3])
    print("\nTop 5 structural-hole spanners (low constraint, high brokerage):")
    print(f"  {'node':>4}  {'constraint':>10}  {'eff. size':>9}  {'score':>7}")
    for node, constraint, eff, score in rows[:5]:
        print(f"  {node:>4}  {constraint:>10.4f}  {eff:>9.4f}  {score:>7.3f}")

    bridges = active_bridges(adjacency, partition, centrality)
    print("\nTop 5 community bridges (edges reaching foreign communities):")
    for report in bridges[:5]:
        print(
            f"  node {report.node_id}: home {report.home_community}, "
            f"{report.num_external_communities} external communities, degree {report.degree}"
        )


if __name__ == "__main__":
    main()
