"""Key embedding, density-based synonym merging, and thematic clustering.

Entity keys are embedded through the same record/replay provider abstraction
as extraction, unit-normalized, and persisted to a binary vector store so the
merge and clustering stages never re-embed.  Synonyms are merged with DBSCAN
over cosine distance; thematic groups are built per entity type with k-means,
with the cluster count selected by silhouette analysis.

All operations iterate keys in canonical string order, which makes every
result independent of input order and reproducible bit-for-bit.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import prompts
from .extraction import RawTriplet
from .notation import EntityKey, format_key, parse_key
from .providers import Provider, ProviderError, ProviderRequest, ReplayCache, cache_roundtrip

Vectors = Mapping[str, np.ndarray]


# ---------------------------------------------------------------------------
# key collection and embedding

def collect_keys(triplets: Iterable[RawTriplet]) -> list[EntityKey]:
    """Unique cause/effect keys across all triplets, canonically sorted."""
    seen: dict[str, EntityKey] = {}
    for triplet in triplets:
        for key in (triplet.cause, triplet.effect):
            seen.setdefault(format_key(key), key)
    return [seen[name] for name in sorted(seen)]


def embed_keys(
    keys: Sequence[EntityKey],
    provider: Provider,
    cache: ReplayCache,
    model: str,
    dim: int,
) -> dict[str, np.ndarray]:
    """Embed each key, returning unit-normalized float32 vectors.

    Vectors are requested in canonical key order; responses must be JSON
    arrays of ``dim`` finite numbers.
    """
    vectors: dict[str, np.ndarray] = {}
    for name in sorted(format_key(k) for k in keys):
        request = ProviderRequest(
            model=model, template_id=prompts.EMBEDDING_TEMPLATE_ID, prompt=name
        )
        response = cache_roundtrip(request, provider, cache)
        values = np.asarray(json.loads(response.decode("utf-8")), dtype=np.float64)
        if values.ndim != 1 or values.shape[0] != dim:
            raise ValueError(f"embedding for {name!r} has dimension {values.shape}, expected {dim}")
        if not np.all(np.isfinite(values)):
            raise ValueError(f"embedding for {name!r} contains non-finite entries")
        norm = np.linalg.norm(values)
        if norm == 0:
            raise ValueError(f"embedding for {name!r} is the zero vector")
        vectors[name] = (values / norm).astype(np.float32)
    return vectors


# ---------------------------------------------------------------------------
# vector store: little-endian f32 matrix plus a JSON key index

_STORE_MAGIC = b"ATLV"
_STORE_VERSION = 1


def save_vectors(vectors: Vectors, path: str | Path) -> None:
    """Write vectors as `<magic><version u16><pad u16><count u32><dim u32>` + f32 rows.

    Rows follow canonical key order; the sidecar ``<path>.keys.json`` maps
    row index to key.
    """
    names = sorted(vectors)
    dim = int(vectors[names[0]].shape[0]) if names else 0
    path = Path(path)
    with open(path, "wb") as handle:
        handle.write(_STORE_MAGIC)
        handle.write(struct.pack("<HHII", _STORE_VERSION, 0, len(names), dim))
        for name in names:
            row = np.asarray(vectors[name], dtype="<f4")
            if row.shape != (dim,):
                raise ValueError(f"vector for {name!r} has shape {row.shape}, expected ({dim},)")
            handle.write(row.tobytes())
    sidecar = {"version": _STORE_VERSION, "count": len(names), "dim": dim, "keys": names}
    Path(str(path) + ".keys.json").write_text(
        json.dumps(sidecar, ensure_ascii=False, indent=0, sort_keys=True) + "\n", encoding="utf-8"
    )


def load_vectors(path: str | Path) -> dict[str, np.ndarray]:
    path = Path(path)
    raw = path.read_bytes()
    if raw[:4] != _STORE_MAGIC:
        raise ValueError(f"{path} is not a vector store (bad magic)")
    version, _, count, dim = struct.unpack("<HHII", raw[4:16])
    if version != _STORE_VERSION:
        raise ValueError(f"unsupported vector store version {version}")
    sidecar = json.loads(Path(str(path) + ".keys.json").read_text(encoding="utf-8"))
    names = sidecar["keys"]
    if len(names) != count:
        raise ValueError("vector store and key index disagree on entry count")
    matrix = np.frombuffer(raw[16:], dtype="<f4").reshape(count, dim)
    return {name: matrix[i].copy() for i, name in enumerate(names)}


# ---------------------------------------------------------------------------
# cosine distance + DBSCAN synonym merge

def cosine_distance_matrix(matrix: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    unit = matrix / norms
    return np.clip(1.0 - unit @ unit.T, 0.0, 2.0)


def dbscan(
    vectors: Vectors, eps: float, min_pts: int
) -> tuple[list[list[str]], list[str]]:
    """Density-based clustering over cosine distance.

    A point is core when at least ``min_pts`` points (itself included) lie
    within ``eps``.  Clusters are grown from core points scanned in canonical
    key order; border points attach to the first cluster that reaches them,
    which makes the outcome independent of input order.  Returns the clusters
    (members sorted) and the noise keys.
    """
    if not 0.0 < eps < 2.0:
        raise ValueError("eps must be in (0, 2)")
    if min_pts < 2:
        raise ValueError("min_pts must be >= 2")
    names = sorted(vectors)
    if not names:
        return [], []
    dims = {vectors[n].shape for n in names}
    if len(dims) > 1:
        raise ValueError(f"vectors have mixed dimensions: {sorted(dims)}")

    matrix = np.stack([np.asarray(vectors[n], dtype=np.float64) for n in names])
    distance = cosine_distance_matrix(matrix)
    within = distance <= eps
    core = within.sum(axis=1) >= min_pts

    assignment = [-1] * len(names)
    clusters: list[list[str]] = []
    for start in range(len(names)):
        if assignment[start] != -1 or not core[start]:
            continue
        cluster_id = len(clusters)
        assignment[start] = cluster_id
        members = [start]
        queue = [start]
        while queue:
            point = queue.pop(0)
            if not core[point]:
                continue  # border points do not expand the cluster
            for neighbor in np.flatnonzero(within[point]):
                if assignment[neighbor] == -1:
                    assignment[neighbor] = cluster_id
                    members.append(int(neighbor))
                    queue.append(int(neighbor))
        clusters.append(sorted(names[i] for i in members))
    noise = [names[i] for i in range(len(names)) if assignment[i] == -1]
    return clusters, noise


def canonical_representative(cluster: Iterable[str], vectors: Vectors) -> str:
    """Member whose vector is most cosine-similar to the cluster mean.

    Ties resolve to the lexicographically smallest key.  Invariant under
    uniform positive scaling of the cluster's vectors.
    """
    names = sorted(cluster)
    if not names:
        raise ValueError("cluster is empty")
    matrix = np.stack([np.asarray(vectors[n], dtype=np.float64) for n in names])
    centroid = matrix.mean(axis=0)
    centroid_norm = np.linalg.norm(centroid)
    if centroid_norm == 0:
        return names[0]
    norms = np.linalg.norm(matrix, axis=1)
    norms[norms == 0] = 1.0
    sims = (matrix @ centroid) / (norms * centroid_norm)
    best = 0
    for i in range(1, len(names)):
        if sims[i] > sims[best]:
            best = i
    return names[best]


@dataclass(frozen=True)
class MergeMap:
    """Flat member-to-canonical mapping produced by the synonym merge."""

    entries: Mapping[str, str]
    clusters: tuple[tuple[str, tuple[str, ...]], ...]

    def resolve(self, name: str) -> str:
        return self.entries.get(name, name)

    def to_document(self) -> dict:
        return {
            "clusters": [
                {"canonical": canonical, "members": list(members)}
                for canonical, members in self.clusters
            ],
        }

    @classmethod
    def from_document(cls, document: Mapping) -> "MergeMap":
        clusters = tuple(
            (c["canonical"], tuple(c["members"])) for c in document["clusters"]
        )
        entries = {m: canonical for canonical, members in clusters for m in members}
        return cls(entries=entries, clusters=clusters)


def build_merge_map(vectors: Vectors, eps: float, min_pts: int) -> MergeMap:
    """Run the synonym merge and pick canonical representatives."""
    clusters, _ = dbscan(vectors, eps=eps, min_pts=min_pts)
    resolved: list[tuple[str, tuple[str, ...]]] = []
    entries: dict[str, str] = {}
    for members in clusters:
        canonical = canonical_representative(members, vectors)
        resolved.append((canonical, tuple(members)))
        for member in members:
            entries[member] = canonical
    resolved.sort(key=lambda pair: pair[0])
    return MergeMap(entries=entries, clusters=tuple(resolved))


def apply_merge(triplets: Sequence[RawTriplet], merge: MergeMap) -> list[RawTriplet]:
    """Rewrite member keys to their canonical representative; count preserved."""
    rewritten: list[RawTriplet] = []
    for triplet in triplets:
        cause = merge.resolve(format_key(triplet.cause))
        effect = merge.resolve(format_key(triplet.effect))
        rewritten.append(
            replace(triplet, cause=parse_key(cause), effect=parse_key(effect))
        )
    return rewritten


# ---------------------------------------------------------------------------
# k-means with silhouette-selected k

@dataclass(frozen=True)
class KMeansResult:
    assignment: Mapping[str, int]
    inertia: float
    objective_history: tuple[float, ...]


def _lloyd(
    matrix: np.ndarray, k: int, first_center: int
) -> tuple[np.ndarray, float, tuple[float, ...]]:
    n = matrix.shape[0]
    centers = [first_center]
    dist_to_nearest = np.linalg.norm(matrix - matrix[first_center], axis=1) ** 2
    while len(centers) < k:
        candidate = int(np.argmax(dist_to_nearest))
        if dist_to_nearest[candidate] == 0.0:
            remaining = [i for i in range(n) if i not in centers]
            candidate = remaining[0]
        centers.append(candidate)
        dist_to_nearest = np.minimum(
            dist_to_nearest, np.linalg.norm(matrix - matrix[candidate], axis=1) ** 2
        )
    centroids = matrix[centers].copy()

    assignment = np.full(n, -1, dtype=int)
    history: list[float] = []
    for _ in range(100):
        distances = ((matrix[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new_assignment = np.argmin(distances, axis=1)
        # Re-seed empty clusters at the point farthest from its centroid;
        # repeat until stable, since a reseed can empty another cluster.
        for _ in range(k):
            empty = [c for c in range(k) if not np.any(new_assignment == c)]
            if not empty:
                break
            for cluster in empty:
                farthest = int(np.argmax(distances[np.arange(n), new_assignment]))
                centroids[cluster] = matrix[farthest]
                distances[:, cluster] = ((matrix - centroids[cluster]) ** 2).sum(axis=1)
                new_assignment = np.argmin(distances, axis=1)
        objective = float(distances[np.arange(n), new_assignment].sum())
        history.append(objective)
        if np.array_equal(new_assignment, assignment):
            break
        assignment = new_assignment
        for cluster in range(k):
            centroids[cluster] = matrix[assignment == cluster].mean(axis=0)
    return assignment, history[-1], tuple(history)


def kmeans(vectors: Vectors, k: int, seed: int, restarts: int = 10) -> KMeansResult:
    """Lloyd's algorithm with farthest-point seeding and seeded restarts.

    Deterministic for fixed (vectors, k, seed): each restart draws its first
    center from a seeded generator, grows the rest farthest-first, and the
    best (then earliest) restart by objective wins.
    """
    names = sorted(vectors)
    n = len(names)
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range for {n} vectors")
    matrix = np.stack([np.asarray(vectors[m], dtype=np.float64) for m in names])
    best: tuple[np.ndarray, float, tuple[float, ...]] | None = None
    for restart in range(restarts):
        rng = np.random.default_rng([seed, restart])
        first = int(rng.integers(n))
        result = _lloyd(matrix, k, first)
        if best is None or result[1] < best[1]:
            best = result
    assert best is not None
    assignment, inertia, history = best
    return KMeansResult(
        assignment={names[i]: int(assignment[i]) for i in range(n)},
        inertia=inertia,
        objective_history=history,
    )


def silhouette_score(vectors: Vectors, assignment: Mapping[str, int]) -> float:
    """Mean silhouette over all points, cosine distance; singletons score 0."""
    names = sorted(vectors)
    labels = np.asarray([assignment[n] for n in names])
    if len(set(labels.tolist())) < 2:
        raise ValueError("silhouette requires at least 2 clusters")
    matrix = np.stack([np.asarray(vectors[n], dtype=np.float64) for n in names])
    distance = cosine_distance_matrix(matrix)
    scores = np.zeros(len(names))
    for i in range(len(names)):
        same = labels == labels[i]
        same_count = int(same.sum())
        if same_count <= 1:
            continue  # singleton: silhouette 0
        a = distance[i, same].sum() / (same_count - 1)
        b = min(
            distance[i, labels == other].mean()
            for other in sorted(set(labels.tolist()))
            if other != labels[i]
        )
        denom = max(a, b)
        if denom > 0:
            scores[i] = (b - a) / denom
    return float(scores.mean())


def select_k(vectors: Vectors, k_range: tuple[int, int], seed: int, restarts: int = 10) -> int:
    """k maximizing mean silhouette over ``k_range``; ties go to the smaller k."""
    n = len(vectors)
    if n < 3:
        raise ValueError("silhouette selection needs at least 3 vectors")
    lo = max(2, k_range[0])
    hi = min(k_range[1], n - 1)
    if lo > hi:
        raise ValueError(f"k range [{k_range[0]}, {k_range[1]}] is empty for n={n}")
    best_k, best_score = lo, -np.inf
    for k in range(lo, hi + 1):
        result = kmeans(vectors, k, seed, restarts=restarts)
        score = silhouette_score(vectors, result.assignment)
        if score > best_score:
            best_k, best_score = k, score
    return best_k


def representatives(cluster: Iterable[str], vectors: Vectors, n: int) -> list[str]:
    """The ``n`` members closest (Euclidean) to the cluster centroid, nearest first."""
    if n < 1:
        raise ValueError("n must be >= 1")
    names = sorted(cluster)
    matrix = np.stack([np.asarray(vectors[name], dtype=np.float64) for name in names])
    centroid = matrix.mean(axis=0)
    distances = np.linalg.norm(matrix - centroid, axis=1)
    order = sorted(range(len(names)), key=lambda i: (distances[i], names[i]))
    return [names[i] for i in order[: min(n, len(names))]]


# ---------------------------------------------------------------------------
# thematic clusters and naming

@dataclass
class ThematicCluster:
    """One per-type thematic grouping of entity keys."""

    id: str
    entity_type: str
    members: list[str]
    representatives: list[str]
    name: str | None = None
    description: str | None = None

    def to_document(self) -> dict:
        return {
            "id": self.id,
            "entity_type": self.entity_type,
            "members": self.members,
            "representatives": self.representatives,
            "name": self.name,
            "description": self.description,
        }


def name_cluster(
    cluster: ThematicCluster,
    provider: Provider,
    cache: ReplayCache,
    model: str,
) -> tuple[str, str]:
    """Ask the provider to name a cluster; fall back to a placeholder name."""
    prompt = prompts.render_naming_prompt(cluster.entity_type, cluster.representatives)
    request = ProviderRequest(model=model, template_id=prompts.NAMING_TEMPLATE_ID, prompt=prompt)
    try:
        response = cache_roundtrip(request, provider, cache)
        payload = json.loads(response.decode("utf-8"))
        return str(payload["name"]), str(payload.get("description", ""))
    except (ProviderError, json.JSONDecodeError, KeyError, UnicodeDecodeError):
        return f"cluster-{cluster.entity_type}-{cluster.id}", ""


def build_thematic_clusters(
    vectors: Vectors,
    seed: int,
    k_range: tuple[int, int] = (2, 15),
    naming_representatives: int = 20,
    restarts: int = 10,
) -> list[ThematicCluster]:
    """Group keys by entity type, cluster each type, order clusters canonically.

    Types with fewer than four keys form a single cluster (silhouette
    selection needs room for at least k=2 against n-1).
    """
    by_type: dict[str, list[str]] = {"human": [], "ai": [], "co": []}
    for name in sorted(vectors):
        by_type[parse_key(name).entity_type].append(name)

    clusters: list[ThematicCluster] = []
    for entity_type in ("human", "ai", "co"):
        names = by_type[entity_type]
        if not names:
            continue
        subset = {name: vectors[name] for name in names}
        if len(names) >= 4:
            k = select_k(subset, k_range, seed, restarts=restarts)
            assignment = kmeans(subset, k, seed, restarts=restarts).assignment
        else:
            assignment = {name: 0 for name in names}
        groups: dict[int, list[str]] = {}
        for name, label in assignment.items():
            groups.setdefault(label, []).append(name)
        # Stable ids: clusters ordered by their smallest member key.
        ordered = sorted(groups.values(), key=lambda members: min(members))
        for index, members in enumerate(ordered):
            members = sorted(members)
            clusters.append(
                ThematicCluster(
                    id=f"{entity_type[0]}{index}",
                    entity_type=entity_type,
                    members=members,
                    representatives=representatives(
                        members, vectors, naming_representatives
                    ),
                )
            )
    return clusters
