"""Parsing of interaction/tagging logs, core filtering, and train/test splits.

The raw logs are plain delimited text (tab or comma, auto-detected from the
first line). Core filtering keeps only objects and tags with at least two
distinct users, and users with at least one surviving object AND one
surviving tag, iterating to a fixed point. Splitting partitions user-object
edges only; all user-tag edges stay in training.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .core import (
    BipartiteGraph,
    EntityIndexMap,
    TripartiteDataset,
    build_graph,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ParseError:
    """One unparseable input line."""

    stream: str  # "objects" or "tags"
    line_number: int
    line: str
    reason: str


@dataclass
class RawRecords:
    """Parsed events before filtering. Ratings, when present, lie in [1, 5]."""

    object_events: list[tuple[str, str, float | None]] = field(default_factory=list)
    tag_events: list[tuple[str, str | None, str]] = field(default_factory=list)
    errors: list[ParseError] = field(default_factory=list)


@dataclass(frozen=True)
class EvaluationSplit:
    """Training dataset plus held-out user-object test edges."""

    training: TripartiteDataset
    test_edges: frozenset[tuple[int, int]]
    seed: int

    @property
    def test_count(self) -> int:
        return len(self.test_edges)


def _is_number(token: str) -> bool:
    try:
        float(token)
        return True
    except ValueError:
        return False


def _detect_delimiter(first_line: str) -> str:
    return "\t" if "\t" in first_line else ","


def _iter_rows(lines: Iterable[str], stream: str, errors: list[ParseError]):
    delim: str | None = None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip():
            continue
        if delim is None:
            delim = _detect_delimiter(line)
        fields = [f.strip() for f in line.split(delim)]
        if lineno == 1 and fields and not _is_number(fields[0]):
            continue  # header
        yield lineno, line, fields


def parse(
    object_stream: Iterable[str],
    tag_stream: Iterable[str],
    rating_threshold: float = 0,
) -> RawRecords:
    """Parse both event streams; rating events below the threshold are dropped.

    Malformed lines are collected into ``records.errors`` with line numbers
    instead of raising. Tag strings are trimmed and lowercased.
    """
    records = RawRecords()

    for lineno, line, fields in _iter_rows(object_stream, "objects", records.errors):
        if len(fields) < 2:
            records.errors.append(
                ParseError("objects", lineno, line, "expected at least user and object")
            )
            continue
        user, obj = fields[0], fields[1]
        rating: float | None = None
        if len(fields) >= 3 and fields[2] != "":
            if not _is_number(fields[2]):
                records.errors.append(
                    ParseError("objects", lineno, line, f"bad rating {fields[2]!r}")
                )
                continue
            rating = float(fields[2])
            if not 1.0 <= rating <= 5.0:
                records.errors.append(
                    ParseError("objects", lineno, line, f"rating {rating} outside [1, 5]")
                )
                continue
        if rating is not None and rating < rating_threshold:
            continue
        records.object_events.append((user, obj, rating))

    for lineno, line, fields in _iter_rows(tag_stream, "tags", records.errors):
        if len(fields) < 2:
            records.errors.append(
                ParseError("tags", lineno, line, "expected at least user and tag")
            )
            continue
        user = fields[0]
        # 2 columns: user, tag. 3+ columns: user, object, tag[, timestamp].
        if len(fields) == 2:
            obj, tag = None, fields[1]
        else:
            obj, tag = fields[1], fields[2]
        tag = tag.strip().lower()
        if not tag:
            records.errors.append(ParseError("tags", lineno, line, "empty tag"))
            continue
        records.tag_events.append((user, obj, tag))

    return records


def core_filter(records: RawRecords) -> TripartiteDataset:
    """Filter to the dense core and build the tripartite dataset.

    Iterates to a fixed point: drop objects/tags with < 2 distinct users,
    then users left without at least one object and one tag. Indices are
    assigned in first-seen event order for reproducibility.
    """
    user_objects: dict[str, set[str]] = {}
    user_tags: dict[str, set[str]] = {}
    for user, obj, _rating in records.object_events:
        user_objects.setdefault(user, set()).add(obj)
    for user, _obj, tag in records.tag_events:
        user_tags.setdefault(user, set()).add(tag)

    users = set(user_objects) & set(user_tags)
    changed = True
    while changed:
        changed = False
        obj_users: dict[str, int] = {}
        tag_users: dict[str, int] = {}
        for u in users:
            for o in user_objects[u]:
                obj_users[o] = obj_users.get(o, 0) + 1
            for t in user_tags[u]:
                tag_users[t] = tag_users.get(t, 0) + 1
        live_objects = {o for o, c in obj_users.items() if c >= 2}
        live_tags = {t for t, c in tag_users.items() if c >= 2}
        survivors = set()
        for u in users:
            objs = user_objects[u] & live_objects
            tags = user_tags[u] & live_tags
            if objs and tags:
                if objs != user_objects[u] or tags != user_tags[u]:
                    user_objects[u] = objs
                    user_tags[u] = tags
                    changed = True
                survivors.add(u)
            else:
                changed = True
        users = survivors

    # Dense indices in first-seen order over the original event streams.
    user_map = EntityIndexMap.from_ids(
        u for u, _o, _r in records.object_events if u in users
    )
    object_map = EntityIndexMap.from_ids(
        o
        for u, o, _r in records.object_events
        if u in users and o in user_objects[u]
    )
    tag_map = EntityIndexMap.from_ids(
        t for u, _o, t in records.tag_events if u in users and t in user_tags[u]
    )

    uo_edges = [
        (user_map.index_of[u], object_map.index_of[o])
        for u in user_map.external_ids
        for o in sorted(user_objects[u], key=object_map.index_of.__getitem__)
    ]
    ut_edges = [
        (user_map.index_of[u], tag_map.index_of[t])
        for u in user_map.external_ids
        for t in sorted(user_tags[u], key=tag_map.index_of.__getitem__)
    ]

    dataset = TripartiteDataset(
        users=user_map,
        objects=object_map,
        tags=tag_map,
        user_object=build_graph(uo_edges, len(user_map), len(object_map)),
        user_tag=build_graph(ut_edges, len(user_map), len(tag_map)),
    )
    if dataset.is_empty:
        logger.warning("core filtering removed every record; dataset is empty")
    return dataset


def split(dataset: TripartiteDataset, train_fraction: float, seed: int) -> EvaluationSplit:
    """Seeded random partition of user-object edges into train and test.

    round(train_fraction * edge_count) edges go to training; the rest are
    held out. User-tag edges all stay in training. Index maps are kept in
    full, so users/objects may have zero training degree.
    """
    if not 0.0 < train_fraction <= 1.0:
        raise ValueError(f"train_fraction must lie in (0, 1], got {train_fraction}")
    if dataset.is_empty:
        raise ValueError("cannot split an empty dataset")

    edges = dataset.user_object.edges()
    n_train = round(train_fraction * len(edges))
    rng = np.random.default_rng(seed)
    perm = rng.permutation(len(edges))
    train_edges = [edges[i] for i in perm[:n_train]]
    test_edges = frozenset(edges[i] for i in perm[n_train:])

    training = TripartiteDataset(
        users=dataset.users,
        objects=dataset.objects,
        tags=dataset.tags,
        user_object=build_graph(
            train_edges, dataset.user_object.left_count, dataset.user_object.right_count
        ),
        user_tag=dataset.user_tag,
    )
    return EvaluationSplit(training=training, test_edges=test_edges, seed=seed)
