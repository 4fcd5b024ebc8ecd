"""Build the findings knowledge graph and export it canonically.

Nodes are canonical entity keys; edges point cause to effect and collapse
parallel findings between the same (source, target, relationship) into one
weighted edge carrying every finding.  Features shared by at least
``threshold`` distinct keys of one entity type are split out into standalone
``type>feature`` hub nodes: the affected keys' endpoints rewire to the hub
and their subtype part remains as a separate entity node.

The export is a versioned JSON document ``{meta, nodes, edges, clusters}``
with sorted keys, sorted node/edge order, and fixed float formatting, so the
same inputs produce the same bytes on every platform.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from .canonical import canonical_json_bytes, load_json
from .extraction import RawTriplet
from .notation import EntityKey, format_key, parse_key
from .semantics import ThematicCluster

SCHEMA_VERSION = "atlas-graph/1"

DEFAULT_SPLIT_THRESHOLD = 5


@dataclass
class AtlasNode:
    id: str
    entity_type: str
    label: str
    thematic_cluster: str | None = None
    is_split_feature: bool = False

    def to_document(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "entity_type": self.entity_type,
            "label": self.label,
            "thematic_cluster": self.thematic_cluster,
            "is_split_feature": self.is_split_feature,
        }


@dataclass
class AtlasEdge:
    source: str
    target: str
    relationship: str
    net_outcome: str
    weight: int
    findings: list[dict[str, str]]
    outcomes: dict[str, int]
    is_self_loop: bool

    @property
    def id(self) -> str:
        return f"{self.source}|{self.relationship}|{self.target}"

    def to_document(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "source": self.source,
            "target": self.target,
            "relationship": self.relationship,
            "net_outcome": self.net_outcome,
            "weight": self.weight,
            "findings": self.findings,
            "outcomes": self.outcomes,
            "is_self_loop": self.is_self_loop,
        }


@dataclass
class AtlasGraph:
    nodes: dict[str, AtlasNode]
    edges: list[AtlasEdge]
    clusters: list[dict[str, Any]] = field(default_factory=list)
    build_config: dict[str, Any] = field(default_factory=dict)
    provenance: dict[str, str] = field(default_factory=dict)

    def validate(self) -> None:
        cluster_ids = {c["id"] for c in self.clusters}
        for edge in self.edges:
            if edge.source not in self.nodes or edge.target not in self.nodes:
                raise ValueError(f"edge {edge.id} references a missing node")
            if edge.weight != len(edge.findings) or edge.weight < 1:
                raise ValueError(f"edge {edge.id} weight disagrees with its findings")
        for node in self.nodes.values():
            parse_key(node.id)  # every node id must be a well-formed key
            if node.thematic_cluster is not None and node.thematic_cluster not in cluster_ids:
                raise ValueError(f"node {node.id} references unknown cluster")

    def to_document(self) -> dict[str, Any]:
        return {
            "meta": {
                "schema_version": SCHEMA_VERSION,
                "build_config": self.build_config,
                "provenance": self.provenance,
                "counts": {
                    "nodes": len(self.nodes),
                    "edges": len(self.edges),
                    "findings": sum(e.weight for e in self.edges),
                    "clusters": len(self.clusters),
                },
            },
            "nodes": [self.nodes[i].to_document() for i in sorted(self.nodes)],
            "edges": [
                e.to_document()
                for e in sorted(self.edges, key=lambda e: (e.source, e.target, e.relationship))
            ],
            "clusters": sorted(self.clusters, key=lambda c: c["id"]),
        }


def _display_label(node_id: str) -> str:
    key = parse_key(node_id)
    prefix = key.entity_type
    for sep in (":", ">"):
        if node_id.startswith(prefix + sep):
            return node_id[len(prefix) + 1 :]
    return node_id


def _feature_tally(keys: Iterable[EntityKey]) -> dict[tuple[str, str], set[str]]:
    """Distinct keys carrying each (entity type, feature segment) pair."""
    tally: dict[tuple[str, str], set[str]] = {}
    for key in keys:
        if key.feature is not None:
            tally.setdefault((key.entity_type, key.feature.format()), set()).add(format_key(key))
    return tally


def build_graph(
    triplets: Sequence[RawTriplet],
    threshold: int = DEFAULT_SPLIT_THRESHOLD,
    clusters: Sequence[ThematicCluster] | None = None,
    provenance: Mapping[str, str] | None = None,
) -> AtlasGraph:
    """Assemble the atlas graph from merged, validated triplets.

    ``threshold`` is the connectivity threshold: the minimum number of
    distinct keys sharing a feature before that feature becomes a standalone
    node.  Cluster labels, when given, annotate nodes whose id appears in a
    cluster's member list.
    """
    unique_keys: dict[str, EntityKey] = {}
    for triplet in triplets:
        for key in (triplet.cause, triplet.effect):
            unique_keys.setdefault(format_key(key), key)

    tally = _feature_tally(unique_keys.values())
    split = {pair for pair, owners in tally.items() if len(owners) >= threshold}

    nodes: dict[str, AtlasNode] = {}
    remap: dict[str, str] = {}

    def ensure_node(node_id: str, entity_type: str, is_split: bool = False) -> None:
        node = nodes.get(node_id)
        if node is None:
            nodes[node_id] = AtlasNode(
                id=node_id,
                entity_type=entity_type,
                label=_display_label(node_id),
                is_split_feature=is_split,
            )
        elif is_split:
            node.is_split_feature = True

    for name in sorted(unique_keys):
        key = unique_keys[name]
        if key.feature is not None and (key.entity_type, key.feature.format()) in split:
            hub = format_key(EntityKey(key.entity_type, feature=key.feature))
            ensure_node(hub, key.entity_type, is_split=True)
            remap[name] = hub
            if key.subtype is not None:
                residual = format_key(EntityKey(key.entity_type, subtype=key.subtype))
                ensure_node(residual, key.entity_type)
        else:
            ensure_node(name, key.entity_type)
            remap[name] = name

    grouped: dict[tuple[str, str, str], list[RawTriplet]] = {}
    for triplet in triplets:
        source = remap[format_key(triplet.cause)]
        target = remap[format_key(triplet.effect)]
        grouped.setdefault((source, target, triplet.relationship), []).append(triplet)

    edges: list[AtlasEdge] = []
    for (source, target, relationship), members in sorted(grouped.items()):
        outcomes = Counter(t.net_outcome for t in members)
        net = next(iter(outcomes)) if len(outcomes) == 1 else "undetermined"
        findings = sorted(
            (
                {
                    "paper_id": t.paper_id,
                    "finding_ref": t.finding_ref,
                    "text": t.finding_text,
                }
                for t in members
            ),
            key=lambda f: (f["paper_id"], f["finding_ref"]),
        )
        edges.append(
            AtlasEdge(
                source=source,
                target=target,
                relationship=relationship,
                net_outcome=net,
                weight=len(members),
                findings=findings,
                outcomes=dict(sorted(outcomes.items())),
                is_self_loop=source == target,
            )
        )

    cluster_docs: list[dict[str, Any]] = []
    if clusters:
        membership: dict[str, str] = {}
        for cluster in clusters:
            cluster_docs.append(cluster.to_document())
            for member in cluster.members:
                membership[member] = cluster.id
        for node in nodes.values():
            node.thematic_cluster = membership.get(node.id)

    graph = AtlasGraph(
        nodes=nodes,
        edges=edges,
        clusters=cluster_docs,
        build_config={"threshold": threshold, "schema_version": SCHEMA_VERSION},
        provenance=dict(provenance or {}),
    )
    graph.validate()
    return graph


def export_graph(graph: AtlasGraph) -> bytes:
    """Canonical bytes of the graph document; identical inputs, identical bytes."""
    graph.validate()
    return canonical_json_bytes(graph.to_document())


def graph_from_document(document: Mapping[str, Any]) -> AtlasGraph:
    meta = document.get("meta", {})
    version = meta.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValueError(f"unsupported graph schema version: {version!r}")
    nodes = {
        n["id"]: AtlasNode(
            id=n["id"],
            entity_type=n["entity_type"],
            label=n["label"],
            thematic_cluster=n.get("thematic_cluster"),
            is_split_feature=bool(n.get("is_split_feature", False)),
        )
        for n in document["nodes"]
    }
    edges = [
        AtlasEdge(
            source=e["source"],
            target=e["target"],
            relationship=e["relationship"],
            net_outcome=e["net_outcome"],
            weight=int(e["weight"]),
            findings=list(e["findings"]),
            outcomes=dict(e.get("outcomes", {})),
            is_self_loop=bool(e.get("is_self_loop", False)),
        )
        for e in document["edges"]
    ]
    graph = AtlasGraph(
        nodes=nodes,
        edges=edges,
        clusters=list(document.get("clusters", [])),
        build_config=dict(meta.get("build_config", {})),
        provenance=dict(meta.get("provenance", {})),
    )
    graph.validate()
    return graph


def load_graph(path: str | Path) -> AtlasGraph:
    return graph_from_document(load_json(path))
