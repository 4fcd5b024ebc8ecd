#!/usr/bin/env python3
"""Show the numeric clustering primitives on synthetic data.

Three acts: DBSCAN merging planted near-duplicates over cosine distance,
silhouette analysis picking the number of thematic groups, and the
centroid-nearest choice of a cluster's canonical representative.
"""

from __future__ import annotations

import math
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from atlas.semantics import (
    canonical_representative,
    dbscan,
    kmeans,
    representatives,
    select_k,
    silhouette_score,
)


def unit(theta_deg: float) -> np.ndarray:
    theta = math.radians(theta_deg)
    return np.array([math.cos(theta), math.sin(theta)])


def main() -> None:
    print("== DBSCAN synonym merge ==")
    # Three keys pointing the same direction (near-synonyms) and one off on
    # its own; eps is a cosine-distance radius, so 0.2 means "within ~37
    # degrees" on the unit circle.
    vectors = {
        "ai:gpt4": unit(0),
        "ai:gpt_4": unit(6),
        "ai:gpt_4o": unit(12),
        "human:designer": unit(90),
    }
    clusters, noise = dbscan(vectors, eps=0.2, min_pts=2)
    print(f"clusters: {clusters}")
    print(f"noise (left unmerged): {noise}")
    rep = canonical_representative(clusters[0], vectors)
    print(f"canonical representative (closest to the cluster mean): {rep}")

    print("\n== silhouette-selected k ==")
    rng = np.random.default_rng(7)
    blobs = {}
    for i in range(15):
        blobs[f"edu{i:02d}"] = unit(float(rng.normal(0, 4)))
        blobs[f"med{i:02d}"] = unit(float(rng.normal(120, 4)))
        blobs[f"art{i:02d}"] = unit(float(rng.normal(240, 4)))
    for k in range(2, 7):
        result = kmeans(blobs, k, seed=7)
        print(f"k={k}: silhouette = {silhouette_score(blobs, result.assignment):+.3f}")
    chosen = select_k(blobs, (2, 6), seed=7)
    print(f"silhouette analysis selects k = {chosen}")

    print("\n== cluster representatives ==")
    result = kmeans(blobs, chosen, seed=7)
    groups: dict[int, list[str]] = {}
    for key, label in result.assignment.items():
        groups.setdefault(label, []).append(key)
    for label, members in sorted(groups.items()):
        top = representatives(members, blobs, 3)
        print(f"cluster {label}: {len(members)} members, nearest to centroid: {top}")


if __name__ == "__main__":
    main()
