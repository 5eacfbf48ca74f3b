"""Average-linkage agglomerative clustering of entities over a blended similarity matrix."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .similarity import SimilarityMatrix, Weights


class ClusteringError(ValueError):
    """Invalid clustering input."""


@dataclass(frozen=True)
class Merge:
    left: int  # cluster id, left < right
    right: int
    height: float  # average dissimilarity at merge time


@dataclass(frozen=True)
class Dendrogram:
    """Full merge history; leaves are 0..n_leaves-1, merged clusters count upward from n_leaves."""

    n_leaves: int
    merges: tuple[Merge, ...]


def to_dissimilarity(matrix: SimilarityMatrix) -> np.ndarray:
    """Symmetrize the (possibly asymmetric) similarity matrix and flip it to a distance."""
    values = matrix.values
    dissimilarity = 1.0 - (values + values.T) / 2.0
    np.fill_diagonal(dissimilarity, 0.0)
    return dissimilarity


def agglomerate(dissimilarity: np.ndarray) -> Dendrogram:
    """UPGMA merge sequence over a symmetric dissimilarity matrix.

    Ties on the merge distance pick the pair with the smallest cluster ids,
    comparing (min id, max id) lexicographically, so results are reproducible.
    """
    matrix = np.asarray(dissimilarity, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ClusteringError("dissimilarity matrix must be square")
    n = matrix.shape[0]
    if n == 0:
        raise ClusteringError("empty dissimilarity matrix")
    if not np.array_equal(matrix, matrix.T):
        raise ClusteringError("dissimilarity matrix must be symmetric")
    if np.any(np.diag(matrix) != 0):
        raise ClusteringError("dissimilarity matrix must have a zero diagonal")

    total = 2 * n - 1
    work = np.full((total, total), np.inf)
    work[:n, :n] = matrix
    np.fill_diagonal(work, np.inf)
    sizes = np.zeros(total, dtype=int)
    sizes[:n] = 1
    active = np.zeros(total, dtype=bool)
    active[:n] = True
    merges = []
    for step in range(n - 1):
        new_id = n + step
        view = work[:new_id, :new_id]
        flat = int(np.argmin(view))  # first minimum in row-major order = smallest id pair
        left, right = divmod(flat, new_id)
        if left > right:
            left, right = right, left
        height = float(work[left, right])
        active[left] = active[right] = False
        others = np.nonzero(active[:new_id])[0]
        if others.size:
            merged = (
                sizes[left] * work[others, left] + sizes[right] * work[others, right]
            ) / (sizes[left] + sizes[right])
            work[others, new_id] = merged
            work[new_id, others] = merged
        sizes[new_id] = sizes[left] + sizes[right]
        active[new_id] = True
        work[left, :] = work[:, left] = np.inf
        work[right, :] = work[:, right] = np.inf
        merges.append(Merge(left, right, height))
    return Dendrogram(n, tuple(merges))


def cut(dendrogram: Dendrogram, n_clusters: int, entities) -> tuple[tuple[str, ...], ...]:
    """Undo the last n_clusters-1 merges and report clusters of entity names.

    Entities are given in leaf order (the matrix order).  Clusters come back
    with sorted members and sorted among themselves.
    """
    entities = tuple(entities)
    if len(entities) != dendrogram.n_leaves:
        raise ClusteringError(
            f"expected {dendrogram.n_leaves} entities, got {len(entities)}"
        )
    if not 1 <= n_clusters <= dendrogram.n_leaves:
        raise ClusteringError(f"cannot cut {dendrogram.n_leaves} leaves into {n_clusters} clusters")
    components: dict[int, list[int]] = {i: [i] for i in range(dendrogram.n_leaves)}
    for step in range(dendrogram.n_leaves - n_clusters):
        merge = dendrogram.merges[step]
        new_id = dendrogram.n_leaves + step
        components[new_id] = components.pop(merge.left) + components.pop(merge.right)
    clusters = sorted(
        tuple(sorted(entities[i] for i in members)) for members in components.values()
    )
    return tuple(clusters)


@dataclass(frozen=True)
class Decomposition:
    """A partition of the entity set into candidate services."""

    codebase: str
    clusters: tuple[tuple[str, ...], ...]  # canonical: members sorted, clusters sorted
    weights: Weights | None = None

    @property
    def n_clusters(self) -> int:
        return len(self.clusters)

    def entities(self) -> tuple[str, ...]:
        return tuple(sorted(e for cluster in self.clusters for e in cluster))

    def assignment(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for index, cluster in enumerate(self.clusters):
            for entity in cluster:
                if entity in out:
                    raise ClusteringError(f"entity in two clusters: {entity!r}")
                out[entity] = index
        return out

    @classmethod
    def from_clusters(cls, codebase: str, clusters, weights: Weights | None = None):
        canonical = tuple(sorted(tuple(sorted(c)) for c in clusters))
        if any(not cluster for cluster in canonical):
            raise ClusteringError("empty cluster")
        decomposition = cls(codebase, canonical, weights)
        decomposition.assignment()  # disjointness check
        return decomposition

    def to_json_dict(self) -> dict:
        return {
            "codebase": self.codebase,
            "weights": list(self.weights.as_tuple()) if self.weights else None,
            "nClusters": self.n_clusters,
            "clusters": [list(cluster) for cluster in self.clusters],
        }

    def serialize(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def parse(cls, text: str) -> "Decomposition":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ClusteringError(f"invalid decomposition JSON: {exc}") from exc
        if not isinstance(raw, dict) or not {"codebase", "nClusters", "clusters"} <= set(raw):
            raise ClusteringError("decomposition JSON missing required keys")
        weights = Weights(*raw["weights"]) if raw.get("weights") else None
        decomposition = cls.from_clusters(raw["codebase"], raw["clusters"], weights)
        if decomposition.n_clusters != raw["nClusters"]:
            raise ClusteringError("nClusters does not match the cluster list")
        return decomposition
