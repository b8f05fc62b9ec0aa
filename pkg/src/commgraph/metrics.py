"""Global graph attributes: degree, density, path lengths, clustering."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import EmptyGraphError
from .graph import Graph, bfs_distances, connected_components

INF = math.inf


@dataclass(frozen=True)
class MetricsReport:
    node_count: int
    edge_count: int
    average_degree: float
    density: float
    average_path_length: float
    diameter: int
    average_clustering: float
    is_connected: bool
    component_count: int


def local_clustering(g: Graph, v: int) -> float:
    """Fraction of neighbor pairs of v that are themselves adjacent; 0 if deg < 2."""
    nbrs = g.neighbors(v)
    deg = len(nbrs)
    if deg < 2:
        return 0.0
    nbr_set = set(nbrs)
    links = 0
    for i, a in enumerate(nbrs):
        adj_a = g.adjacency[a]
        for b, _ in adj_a:
            if b in nbr_set and b > a:
                links += 1
    return links / (deg * (deg - 1) / 2)


def global_metrics(g: Graph) -> MetricsReport:
    """The full attribute bundle for a graph with at least one node.

    Path statistics cover unordered reachable pairs only; with no reachable
    pair at all (edgeless or single-node graphs) both the average path length
    and the diameter report 0.
    """
    n = g.node_count
    if n == 0:
        raise EmptyGraphError("metrics are undefined on an empty graph")

    dist_sum = 0
    pair_count = 0
    longest = 0
    for source in range(n):
        dist = bfs_distances(g, source)
        for target in range(source + 1, n):
            d = dist[target]
            if d < INF:
                dist_sum += int(d)
                pair_count += 1
                if d > longest:
                    longest = int(d)

    clustering_sum = sum(local_clustering(g, v) for v in range(n))
    components = connected_components(g)

    return MetricsReport(
        node_count=n,
        edge_count=g.edge_count,
        average_degree=2 * g.edge_count / n,
        density=2 * g.edge_count / (n * (n - 1)) if n >= 2 else 0.0,
        average_path_length=dist_sum / pair_count if pair_count else 0.0,
        diameter=longest,
        average_clustering=clustering_sum / n,
        is_connected=components.community_count == 1,
        component_count=components.community_count,
    )
