"""Object scoring and top-L list construction for a target user.

The preference of the target for an uncollected object is the sum, over all
other users, of their similarity toward the target times their adjacency to
the object. Objects the target already collected in training never appear.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import TripartiteDataset
from .similarity import SimilarityRow


@dataclass(frozen=True)
class ScoreVector:
    """Sparse positive preference scores over objects NOT collected by the target."""

    target: int
    scores: dict[int, float]


@dataclass(frozen=True)
class RecommendationList:
    """Top-L objects by descending score, ties broken by ascending index."""

    target: int
    entries: list[tuple[int, float]]


def score_objects(training: TripartiteDataset, row: SimilarityRow) -> ScoreVector:
    """Scatter the similarity row over neighbor lists into object scores."""
    v = row.target
    collected = set(training.user_object.left_neighbors(v).tolist())
    scores: dict[int, float] = {}
    for u, s in row.scores.items():
        if u == v:
            continue
        for alpha in training.user_object.left_neighbors(u).tolist():
            if alpha in collected:
                continue
            scores[alpha] = scores.get(alpha, 0.0) + s
    return ScoreVector(target=v, scores={a: s for a, s in scores.items() if s > 0.0})


def top_l(scores: ScoreVector, L: int) -> RecommendationList:
    """The L highest-scoring objects; zero-score objects are never recommended."""
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    ranked = sorted(scores.scores.items(), key=lambda item: (-item[1], item[0]))
    return RecommendationList(target=scores.target, entries=ranked[:L])
