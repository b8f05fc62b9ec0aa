"""The five node-centrality measures and their ranking/serialization helpers.

Conventions (all for undirected unweighted traversal):
    degree       raw deg(v); normalized deg(v)/(N-1)
    betweenness  Brandes accumulation over unordered pairs; normalized by
                 (N-1)(N-2)/2
    closeness    raw 1/sum(d); normalized Wasserman-Faust component scaling
                 ((n_c-1)/sum(d)) * ((n_c-1)/(N-1))
    harmonic     raw sum(1/d); normalized by (N-1)
    pagerank     damped random-walk fixed point; normalized form sums to 1,
                 raw form is exactly N times larger (constant (1-d) term)
"""

from __future__ import annotations

import csv
import io
import logging
import math
from collections import deque
from dataclasses import dataclass

from .errors import ConvergenceError, DegenerateGraphError
from .graph import Graph, bfs_distances, canonical_label

logger = logging.getLogger(__name__)

MEASURES = ("degree", "betweenness", "closeness", "harmonic", "pagerank")

INF = math.inf


@dataclass(frozen=True)
class CentralityVector:
    measure: str
    scores: tuple[float, ...]
    normalized: bool

    def __post_init__(self):
        if self.measure not in MEASURES:
            raise ValueError(f"unknown measure {self.measure!r}")


def degree_centrality(g: Graph, normalized: bool = True) -> CentralityVector:
    n = g.node_count
    if normalized:
        if n < 2:
            raise DegenerateGraphError("normalized degree needs at least 2 nodes")
        scores = tuple(g.degree(v) / (n - 1) for v in range(n))
    else:
        scores = tuple(float(g.degree(v)) for v in range(n))
    return CentralityVector("degree", scores, normalized)


def betweenness_centrality(g: Graph, normalized: bool = True) -> CentralityVector:
    """Brandes single-source accumulation; never enumerates paths."""
    n = g.node_count
    scores = [0.0] * n
    for s in range(n):
        order, preds, sigma = _shortest_path_dag(g, s)
        delta = [0.0] * n
        while order:
            w = order.pop()
            coeff = (1 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                scores[w] += delta[w]
    # each unordered pair is counted from both endpoints
    scores = [x / 2 for x in scores]
    if normalized:
        denom = (n - 1) * (n - 2) / 2
        scores = [x / denom for x in scores] if denom > 0 else [0.0] * n
    return CentralityVector("betweenness", tuple(scores), normalized)


def _shortest_path_dag(g: Graph, s: int):
    """BFS from s returning visitation order, predecessor lists, path counts."""
    n = g.node_count
    dist = [-1] * n
    sigma = [0] * n
    preds: list[list[int]] = [[] for _ in range(n)]
    dist[s] = 0
    sigma[s] = 1
    order: list[int] = []
    queue = deque([s])
    while queue:
        u = queue.popleft()
        order.append(u)
        for v, _ in g.adjacency[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
            if dist[v] == dist[u] + 1:
                sigma[v] += sigma[u]
                preds[v].append(u)
    return order, preds, sigma


def closeness_centrality(g: Graph, normalized: bool = True) -> CentralityVector:
    n = g.node_count
    scores = []
    for v in range(n):
        dist = bfs_distances(g, v)
        finite = [d for u, d in enumerate(dist) if u != v and d < INF]
        total = sum(finite)
        if total == 0:
            if g.degree(v) == 0:
                logger.warning("closeness of isolated node %d reported as 0", v)
            scores.append(0.0)
            continue
        if normalized:
            reach = len(finite)
            scores.append((reach / total) * (reach / (n - 1)))
        else:
            scores.append(1 / total)
    return CentralityVector("closeness", tuple(scores), normalized)


def harmonic_centrality(g: Graph, normalized: bool = True) -> CentralityVector:
    n = g.node_count
    scores = []
    for v in range(n):
        dist = bfs_distances(g, v)
        total = sum(1 / d for u, d in enumerate(dist) if u != v and d < INF)
        scores.append(total / (n - 1) if normalized and n > 1 else total)
    return CentralityVector("harmonic", tuple(scores), normalized)


def pagerank(
    g: Graph,
    damping: float = 0.85,
    tol: float = 1e-9,
    max_iter: int = 200,
    normalized: bool = True,
) -> CentralityVector:
    """Damped random-walk fixed point, undirected edges as reciprocal links.

    Normalized scores solve PR(v) = (1-d)/N + d * sum(PR(u)/deg(u)) and sum
    to 1; isolated nodes redistribute their mass uniformly. The raw form
    (constant (1-d) term, summing to N) is the same vector scaled by N.
    """
    if not 0 < damping < 1:
        raise ValueError(f"damping must lie in (0, 1), got {damping}")
    final = None
    for ranks in _pagerank_sweeps(g, damping, max_iter):
        final = ranks
        if final.residual < tol:
            break
    if final is None or final.residual >= tol:
        residual = final.residual if final else INF
        raise ConvergenceError(
            f"pagerank did not reach tol={tol} within {max_iter} iterations", residual
        )
    scores = final.scores if normalized else [x * g.node_count for x in final.scores]
    return CentralityVector("pagerank", tuple(scores), normalized)


@dataclass
class _Sweep:
    scores: list[float]
    residual: float


def _pagerank_sweeps(g: Graph, damping: float, max_iter: int):
    """Yield successive sum-to-1 iterates with their L1 change."""
    n = g.node_count
    ranks = [1 / n] * n
    base = (1 - damping) / n
    for _ in range(max_iter):
        dangling = sum(ranks[v] for v in range(n) if g.degree(v) == 0)
        spread = damping * dangling / n
        nxt = [
            base + spread + damping * sum(ranks[u] / g.degree(u) for u, _ in g.adjacency[v])
            for v in range(n)
        ]
        residual = sum(abs(a - b) for a, b in zip(nxt, ranks))
        ranks = nxt
        yield _Sweep(ranks, residual)


def rank_top_k(vec: CentralityVector, k: int, labels) -> list[tuple[str, float]]:
    """Top-k (label, score), descending score, ties by ascending label."""
    if k < 1:
        raise ValueError("k must be at least 1")
    order = sorted(
        zip(labels, vec.scores),
        key=lambda item: (-item[1], canonical_label(item[0]), item[0]),
    )
    return order[: min(k, len(order))]


def all_centralities(g: Graph, damping: float = 0.85) -> dict[str, CentralityVector]:
    """All five normalized measures, keyed in canonical MEASURES order."""
    return {
        "degree": degree_centrality(g),
        "betweenness": betweenness_centrality(g),
        "closeness": closeness_centrality(g),
        "harmonic": harmonic_centrality(g),
        "pagerank": pagerank(g, damping=damping),
    }


def centrality_table_csv(g: Graph, vectors: dict[str, CentralityVector]) -> str:
    """Per-node CSV, 6 significant digits, rows sorted by label."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["label"] + list(MEASURES))
    rows = sorted(
        range(g.node_count), key=lambda v: (canonical_label(g.labels[v]), g.labels[v])
    )
    for v in rows:
        writer.writerow([g.labels[v]] + [format(vectors[m].scores[v], ".6g") for m in MEASURES])
    return buf.getvalue()
