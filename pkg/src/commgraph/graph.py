"""Immutable undirected weighted simple graph over dense integer node ids."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .errors import GraphBuildError

INSTITUTION_KINDS = ("public", "medical", "technical", "other")

INF = math.inf


def canonical_label(label: str) -> str:
    """Trim, collapse internal whitespace, and case-fold a node label.

    Two labels denote the same node iff their canonical forms are equal.
    """
    return " ".join(label.split()).casefold()


def display_label(label: str) -> str:
    """Trim and collapse internal whitespace, keeping the original case."""
    return " ".join(label.split())


@dataclass(frozen=True)
class NodeRecord:
    """Institution attributes carried on a node.

    `external_score` is an opaque imported attribute; nothing in this package
    computes or interprets it.
    """

    label: str
    kind: str = "other"
    location: str | None = None
    external_score: float | None = None

    def __post_init__(self):
        if not display_label(self.label):
            raise GraphBuildError("node label must be non-empty")
        if self.kind not in INSTITUTION_KINDS:
            raise GraphBuildError(f"unknown institution kind {self.kind!r}")
        if self.external_score is not None and self.external_score < 0:
            raise GraphBuildError(f"external_score must be non-negative, got {self.external_score}")


@dataclass
class BuildCounts:
    """Cleaning events observed while assembling a graph from raw pairs."""

    duplicates_collapsed: int = 0
    self_loops_dropped: int = 0


@dataclass(frozen=True)
class Graph:
    """Undirected weighted simple graph; immutable after construction.

    Node ids are dense 0..N-1 indices into `records`. `adjacency[u]` lists
    (neighbor, weight) pairs sorted by neighbor id; it is symmetric, holds no
    self-loops and at most one entry per neighbor.
    """

    records: tuple[NodeRecord, ...]
    adjacency: tuple[tuple[tuple[int, float], ...], ...]
    edge_count: int

    @property
    def node_count(self) -> int:
        return len(self.records)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(r.label for r in self.records)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(n for n, _ in self.adjacency[v])

    def edges(self):
        """Yield (u, v, weight) with u < v, ascending."""
        for u, nbrs in enumerate(self.adjacency):
            for v, w in nbrs:
                if u < v:
                    yield u, v, w

    def total_weight(self) -> float:
        return sum(w for _, _, w in self.edges())

    def unweighted(self) -> Graph:
        """Skeleton copy with every edge weight reset to 1.0."""
        adjacency = tuple(tuple((n, 1.0) for n, _ in nbrs) for nbrs in self.adjacency)
        return Graph(self.records, adjacency, self.edge_count)


@dataclass(frozen=True)
class Partition:
    """Total assignment of node ids to contiguous community ids.

    Canonical form: community ids appear in order of their smallest member,
    so two partitions with the same blocks compare equal.
    """

    assignment: tuple[int, ...]
    community_count: int

    @classmethod
    def from_assignment(cls, labels) -> Partition:
        """Canonicalize arbitrary hashable labels into contiguous ids."""
        remap: dict = {}
        out = []
        for lab in labels:
            if lab not in remap:
                remap[lab] = len(remap)
            out.append(remap[lab])
        return cls(tuple(out), len(remap))

    def canonical(self) -> Partition:
        """Relabel community ids by order of smallest contained node id."""
        return Partition.from_assignment(self.assignment)

    def communities(self) -> list[list[int]]:
        groups: list[list[int]] = [[] for _ in range(self.community_count)]
        for node, cid in enumerate(self.assignment):
            groups[cid].append(node)
        return groups

    def __post_init__(self):
        seen = sorted(set(self.assignment)) if self.assignment else []
        if seen != list(range(self.community_count)):
            raise ValueError("community ids must be contiguous 0..community_count-1")


def build_graph(records, edges) -> tuple[Graph, BuildCounts]:
    """Assemble a Graph from node records and (label, label[, weight]) pairs.

    Parallel edges collapse by summing weights; self-loops are dropped and
    counted. Endpoint labels are matched by canonical form and must resolve
    to a record.
    """
    records = tuple(records)
    index: dict[str, int] = {}
    for i, rec in enumerate(records):
        key = canonical_label(rec.label)
        if key in index:
            raise GraphBuildError(f"duplicate node label {rec.label!r} after canonicalization")
        index[key] = i

    counts = BuildCounts()
    weights: dict[tuple[int, int], float] = {}
    for pos, edge in enumerate(edges, start=1):
        if len(edge) == 2:
            (src, dst), w = edge, 1.0
        else:
            src, dst, w = edge
            if w is None:
                w = 1.0
        if not math.isfinite(w) or w <= 0:
            raise GraphBuildError(f"edge {pos}: weight must be positive, got {w!r}")
        try:
            u = index[canonical_label(src)]
        except KeyError:
            raise GraphBuildError(f"unknown endpoint label {src!r} (edge {pos})") from None
        try:
            v = index[canonical_label(dst)]
        except KeyError:
            raise GraphBuildError(f"unknown endpoint label {dst!r} (edge {pos})") from None
        if u == v:
            counts.self_loops_dropped += 1
            continue
        pair = (u, v) if u < v else (v, u)
        if pair in weights:
            weights[pair] += w
            counts.duplicates_collapsed += 1
        else:
            weights[pair] = w

    nbrs: list[list[tuple[int, float]]] = [[] for _ in records]
    for (u, v), w in weights.items():
        nbrs[u].append((v, w))
        nbrs[v].append((u, w))
    adjacency = tuple(tuple(sorted(lst)) for lst in nbrs)
    return Graph(records, adjacency, len(weights)), counts


def bfs_distances(g: Graph, source: int) -> list[float]:
    """Hop distances from `source`; unreachable nodes get math.inf."""
    if not 0 <= source < g.node_count:
        raise IndexError(f"source {source} out of range for {g.node_count} nodes")
    dist = [INF] * g.node_count
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v, _ in g.adjacency[u]:
            if dist[v] == INF:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def connected_components(g: Graph) -> Partition:
    """Component labeling; labels contiguous from 0 ordered by smallest member."""
    label = [-1] * g.node_count
    current = 0
    for start in range(g.node_count):
        if label[start] != -1:
            continue
        label[start] = current
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v, _ in g.adjacency[u]:
                if label[v] == -1:
                    label[v] = current
                    queue.append(v)
        current += 1
    return Partition(tuple(label), current)
