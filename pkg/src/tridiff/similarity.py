"""User-user similarity kernels on a bipartite graph.

Three families, all computed per target user (never as a full m x m matrix):

* diffusion: a unit of resource at the target spreads equally to its
  right-node neighbors, then each right node spreads its share equally back
  to its users. The fraction user u ends up with is the (asymmetric)
  similarity of u toward the target. Rows conserve mass: they sum to 1
  whenever the target has degree >= 1.
* cosine: overlap / sqrt(k(u) * k(v)) on the binary neighbor sets.
* jaccard: overlap / union size.

Rows from the user-object and user-tag graphs are fused linearly with a
weight lam in [0, 1] (lam = 1 keeps only the object channel).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import BipartiteGraph

DIFFUSION = "diffusion"
COSINE = "cosine"
JACCARD = "jaccard"
KINDS = (DIFFUSION, COSINE, JACCARD)

# kind strings carried by rows: "<family>-object" / "<family>-tag" / "fused"


@dataclass(frozen=True)
class ResourceVector:
    """First diffusion step: share of the unit resource on each right node."""

    target: int
    amounts: dict[int, float]


@dataclass(frozen=True)
class SimilarityRow:
    """Sparse similarities of all users toward one target user.

    Absent entries are exact zeros; stored scores are strictly positive.
    The self entry (u == target) is kept; consumers decide whether to use it.
    """

    target: int
    scores: dict[int, float]
    kind: str
    lam: float | None = None


def spread(graph: BipartiteGraph, v: int) -> ResourceVector:
    """Distribute a unit of resource from v equally over its neighbors."""
    neigh = graph.left_neighbors(v)
    if len(neigh) == 0:
        return ResourceVector(target=v, amounts={})
    share = 1.0 / len(neigh)
    return ResourceVector(target=v, amounts={int(a): share for a in neigh})


def diffusion_vector(graph: BipartiteGraph, v: int) -> np.ndarray:
    """Dense two-step diffusion similarities toward target v (length left_count)."""
    alphas = graph.left_neighbors(v)
    kv = len(alphas)
    if kv == 0:
        return np.zeros(graph.left_count)
    right_deg = graph.right_degrees[alphas]
    users = graph.right_neighbors_flat(alphas)
    weights = np.repeat(1.0 / (kv * right_deg), right_deg)
    return np.bincount(users, weights=weights, minlength=graph.left_count)


def overlap_vector(graph: BipartiteGraph, v: int) -> np.ndarray:
    """Dense neighbor-set overlap counts |G(u) & G(v)| for all u."""
    alphas = graph.left_neighbors(v)
    if len(alphas) == 0:
        return np.zeros(graph.left_count)
    users = graph.right_neighbors_flat(alphas)
    return np.bincount(users, minlength=graph.left_count).astype(np.float64)


def cosine_vector(graph: BipartiteGraph, v: int) -> np.ndarray:
    """Dense binary cosine similarities toward target v."""
    ov = overlap_vector(graph, v)
    kv = graph.left_degree(v)
    if kv == 0:
        return ov
    nz = ov > 0
    deg = graph.left_degrees
    ov[nz] /= np.sqrt(deg[nz] * float(kv))
    return ov


def jaccard_vector(graph: BipartiteGraph, v: int) -> np.ndarray:
    """Dense Jaccard similarities toward target v."""
    ov = overlap_vector(graph, v)
    kv = graph.left_degree(v)
    if kv == 0:
        return ov
    nz = ov > 0
    deg = graph.left_degrees
    ov[nz] /= deg[nz] + kv - ov[nz]
    return ov


def similarity_vector(graph: BipartiteGraph, v: int, kind: str) -> np.ndarray:
    """Dispatch on similarity family name."""
    if kind == DIFFUSION:
        return diffusion_vector(graph, v)
    if kind == COSINE:
        return cosine_vector(graph, v)
    if kind == JACCARD:
        return jaccard_vector(graph, v)
    raise ValueError(f"unknown similarity kind: {kind!r}")


def _to_row(vec: np.ndarray, v: int, kind: str) -> SimilarityRow:
    nz = np.nonzero(vec)[0]
    return SimilarityRow(
        target=v, scores={int(u): float(vec[u]) for u in nz}, kind=kind
    )


def diffusion_row(graph: BipartiteGraph, v: int, channel: str = "object") -> SimilarityRow:
    return _to_row(diffusion_vector(graph, v), v, f"{DIFFUSION}-{channel}")


def cosine_row(graph: BipartiteGraph, v: int, channel: str = "object") -> SimilarityRow:
    return _to_row(cosine_vector(graph, v), v, f"{COSINE}-{channel}")


def jaccard_row(graph: BipartiteGraph, v: int, channel: str = "object") -> SimilarityRow:
    return _to_row(jaccard_vector(graph, v), v, f"{JACCARD}-{channel}")


def fuse(object_row: SimilarityRow, tag_row: SimilarityRow, lam: float) -> SimilarityRow:
    """Linear combination lam * object + (1 - lam) * tag, absent entries = 0."""
    if object_row.target != tag_row.target:
        raise ValueError(
            f"target mismatch: {object_row.target} vs {tag_row.target}"
        )
    obj_family = object_row.kind.split("-")[0]
    tag_family = tag_row.kind.split("-")[0]
    if obj_family != tag_family:
        raise ValueError(f"incompatible kinds: {object_row.kind} vs {tag_row.kind}")
    if not 0.0 <= lam <= 1.0 or math.isnan(lam):
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    scores: dict[int, float] = {}
    for u, s in object_row.scores.items():
        scores[u] = lam * s
    for u, s in tag_row.scores.items():
        scores[u] = scores.get(u, 0.0) + (1.0 - lam) * s
    scores = {u: s for u, s in scores.items() if s > 0.0}
    return SimilarityRow(target=object_row.target, scores=scores, kind="fused", lam=lam)
