"""Community detection: modularity, Louvain optimization, Girvan-Newman.

Determinism contract: Louvain sweeps nodes in ascending id order, breaks
gain ties toward the lowest community id, and never randomizes, so a given
graph always yields the same dendrogram. Girvan-Newman breaks betweenness
ties toward the smallest (min-id, max-id) endpoint pair.
"""

from __future__ import annotations

import csv
import io
import math
from collections import deque
from dataclasses import dataclass

from .errors import PartitionMismatchError, UndefinedModularityError
from .graph import Graph, Partition

_GAIN_EPS = 1e-7  # level-to-level modularity improvement below this stops Louvain


@dataclass
class AggregateGraph:
    """Weighted graph that admits self-loops; the internal Louvain form.

    A self-loop of weight w counts once toward intra-community weight and
    twice toward its node's degree, which keeps modularity invariant across
    aggregation levels.
    """

    adjacency: list[dict[int, float]]
    self_loops: list[float]

    @classmethod
    def from_graph(cls, g: Graph) -> AggregateGraph:
        adjacency = [dict(nbrs) for nbrs in g.adjacency]
        return cls(adjacency, [0.0] * g.node_count)

    @property
    def node_count(self) -> int:
        return len(self.adjacency)

    def weighted_degree(self, v: int) -> float:
        return sum(self.adjacency[v].values()) + 2 * self.self_loops[v]

    def total_weight(self) -> float:
        return sum(sum(nbrs.values()) for nbrs in self.adjacency) / 2 + sum(self.self_loops)


def _modularity_kernel(agg: AggregateGraph, assignment) -> float:
    """Q = sum_c [ e_c/m - (d_c/2m)^2 ] over the given community assignment."""
    m = agg.total_weight()
    if m <= 0:
        raise UndefinedModularityError("modularity is undefined with zero total edge weight")
    count = max(assignment) + 1 if assignment else 0
    intra = [0.0] * count
    degree = [0.0] * count
    for v in range(agg.node_count):
        c = assignment[v]
        degree[c] += agg.weighted_degree(v)
        intra[c] += agg.self_loops[v]
        for u, w in agg.adjacency[v].items():
            if assignment[u] == c and u < v:
                intra[c] += w
    return sum(e / m - (d / (2 * m)) ** 2 for e, d in zip(intra, degree))


def modularity(g: Graph, p: Partition) -> float:
    """Partition quality on [-1, 1]; requires p to cover every node."""
    if len(p.assignment) != g.node_count:
        raise PartitionMismatchError(
            f"partition covers {len(p.assignment)} nodes, graph has {g.node_count}"
        )
    return _modularity_kernel(AggregateGraph.from_graph(g), p.assignment)


def aggregate_graph(g: Graph | AggregateGraph, p: Partition) -> AggregateGraph:
    """Collapse each community to one super-node, conserving total weight.

    Inter-community edges sum into single edges; intra-community weight
    (including existing self-loops) becomes the super-node's self-loop.
    """
    agg = AggregateGraph.from_graph(g) if isinstance(g, Graph) else g
    if len(p.assignment) != agg.node_count:
        raise PartitionMismatchError(
            f"partition covers {len(p.assignment)} nodes, graph has {agg.node_count}"
        )
    n = p.community_count
    adjacency: list[dict[int, float]] = [{} for _ in range(n)]
    self_loops = [0.0] * n
    for v in range(agg.node_count):
        c = p.assignment[v]
        self_loops[c] += agg.self_loops[v]
        for u, w in agg.adjacency[v].items():
            cu = p.assignment[u]
            if cu == c:
                if u < v:
                    self_loops[c] += w
            else:
                adjacency[c][cu] = adjacency[c].get(cu, 0.0) + w
    return AggregateGraph(adjacency, self_loops)


@dataclass(frozen=True)
class Dendrogram:
    """Louvain levels, finest first, all expressed over original node ids."""

    levels: tuple[Partition, ...]
    q_per_level: tuple[float, ...]

    @property
    def final_partition(self) -> Partition:
        return self.levels[-1]

    @property
    def final_q(self) -> float:
        return self.q_per_level[-1]


def _local_sweep(agg: AggregateGraph, m: float) -> tuple[list[int], bool]:
    """Phase 1: greedy node moves until a full pass changes nothing.

    Returns (community assignment, whether any move happened). Nodes are
    visited in ascending id order; a node moves to the neighboring community
    with the largest strictly positive gain, lowest community id on ties.
    """
    n = agg.node_count
    community = list(range(n))
    degree = [agg.weighted_degree(v) for v in range(n)]
    tot = degree[:]  # total weighted degree per community label
    moved_any = False
    improved = True
    while improved:
        improved = False
        for v in range(n):
            old = community[v]
            k_v = degree[v]
            # weight from v to each adjacent community (self-loops excluded)
            link: dict[int, float] = {}
            for u, w in agg.adjacency[v].items():
                link[community[u]] = link.get(community[u], 0.0) + w
            tot[old] -= k_v
            stay_gain = link.get(old, 0.0) / m - tot[old] * k_v / (2 * m * m)
            best_c, best_gain = old, 0.0
            # ascending candidate order + strict improvement = lowest id wins ties
            for c in sorted(link):
                if c == old:
                    continue
                gain = link[c] / m - tot[c] * k_v / (2 * m * m) - stay_gain
                if gain > best_gain:
                    best_c, best_gain = c, gain
            tot[best_c] += k_v
            if best_c != old:
                community[v] = best_c
                improved = True
                moved_any = True
    return community, moved_any


def louvain(g: Graph) -> Dendrogram:
    """Two-phase modularity optimization over successive aggregation levels."""
    agg = AggregateGraph.from_graph(g)
    m = agg.total_weight()
    if m <= 0:
        raise UndefinedModularityError("modularity is undefined with zero total edge weight")
    original = AggregateGraph.from_graph(g)
    node_map = list(range(g.node_count))  # original node -> current super-node

    levels: list[Partition] = []
    qs: list[float] = []
    while True:
        assignment, moved = _local_sweep(agg, m)
        local = Partition.from_assignment(assignment)
        projected = Partition.from_assignment([local.assignment[node_map[v]] for v in range(g.node_count)])
        q = _modularity_kernel(original, projected.assignment)
        if levels and (not moved or q - qs[-1] < _GAIN_EPS):
            break
        levels.append(projected)
        qs.append(q)
        if not moved:
            break
        agg = aggregate_graph(agg, local)
        node_map = [local.assignment[s] for s in node_map]
    return Dendrogram(tuple(levels), tuple(qs))


def edge_betweenness(g: Graph) -> dict[tuple[int, int], float]:
    """Per-edge shortest-path betweenness over unordered node pairs."""
    adjacency = [[u for u, _ in nbrs] for nbrs in g.adjacency]
    return _edge_betweenness(adjacency)


def _edge_betweenness(adjacency: list[list[int]]) -> dict[tuple[int, int], float]:
    n = len(adjacency)
    scores: dict[tuple[int, int], float] = {}
    for u in range(n):
        for v in adjacency[u]:
            if u < v:
                scores[(u, v)] = 0.0
    for s in range(n):
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
            for v in adjacency[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    queue.append(v)
                if dist[v] == dist[u] + 1:
                    sigma[v] += sigma[u]
                    preds[v].append(u)
        delta = [0.0] * n
        while order:
            w = order.pop()
            coeff = (1 + delta[w]) / sigma[w]
            for v in preds[w]:
                contribution = sigma[v] * coeff
                key = (v, w) if v < w else (w, v)
                scores[key] += contribution
                delta[v] += contribution
    return {e: x / 2 for e, x in scores.items()}


def _components(adjacency: list[list[int]]) -> Partition:
    n = len(adjacency)
    label = [-1] * n
    current = 0
    for start in range(n):
        if label[start] != -1:
            continue
        label[start] = current
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in adjacency[u]:
                if label[v] == -1:
                    label[v] = current
                    queue.append(v)
        current += 1
    return Partition(tuple(label), current)


@dataclass(frozen=True)
class GNTrace:
    """Full divisive run: every removal with the modularity it produced."""

    removals: tuple[tuple[tuple[int, int], float], ...]
    best_partition: Partition
    best_q: float


def girvan_newman(g: Graph) -> GNTrace:
    """Remove max-betweenness edges one at a time, recomputing after each.

    Candidate partitions are the connected components of the pruned graph;
    their modularity is always evaluated on the original graph. The earliest
    maximum wins.
    """
    if g.edge_count == 0:
        raise UndefinedModularityError("modularity is undefined with zero total edge weight")
    original = AggregateGraph.from_graph(g)
    adjacency = [[u for u, _ in nbrs] for nbrs in g.adjacency]

    best_partition = _components(adjacency)
    best_q = _modularity_kernel(original, best_partition.assignment)
    removals: list[tuple[tuple[int, int], float]] = []
    edges_left = g.edge_count
    while edges_left:
        scores = _edge_betweenness(adjacency)
        target = min(scores, key=lambda e: (-scores[e], e))
        u, v = target
        adjacency[u].remove(v)
        adjacency[v].remove(u)
        edges_left -= 1
        part = _components(adjacency)
        q = _modularity_kernel(original, part.assignment)
        removals.append((target, q))
        if q > best_q:
            best_partition, best_q = part, q
    return GNTrace(tuple(removals), best_partition, best_q)


def compare_partitions(a: Partition, b: Partition) -> dict:
    """Canonical-form identity plus normalized mutual information.

    NMI uses natural logarithms; when both partitions carry zero entropy
    (single community each) the 0/0 case is defined as 1.0.
    """
    if len(a.assignment) != len(b.assignment):
        raise PartitionMismatchError(
            f"partitions cover {len(a.assignment)} and {len(b.assignment)} nodes"
        )
    n = len(a.assignment)
    joint: dict[tuple[int, int], int] = {}
    for ca, cb in zip(a.assignment, b.assignment):
        joint[(ca, cb)] = joint.get((ca, cb), 0) + 1
    size_a = [0] * a.community_count
    size_b = [0] * b.community_count
    for (ca, cb), cnt in joint.items():
        size_a[ca] += cnt
        size_b[cb] += cnt

    h_a = -sum(s / n * math.log(s / n) for s in size_a if s)
    h_b = -sum(s / n * math.log(s / n) for s in size_b if s)
    if h_a + h_b == 0:
        nmi = 1.0
    else:
        info = sum(
            cnt / n * math.log(cnt * n / (size_a[ca] * size_b[cb]))
            for (ca, cb), cnt in joint.items()
        )
        nmi = 2 * info / (h_a + h_b)
        nmi = min(max(nmi, 0.0), 1.0)  # clamp float noise at the boundaries
    return {"identical": a.canonical() == b.canonical(), "nmi": nmi}


def partition_to_csv(labels, p: Partition) -> str:
    """`label,community` rows in canonical community ids, sorted by label."""
    canon = p.canonical()
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["label", "community"])
    order = sorted(range(len(labels)), key=lambda v: (labels[v].casefold(), labels[v]))
    for v in order:
        writer.writerow([labels[v], canon.assignment[v]])
    return buf.getvalue()


def gn_trace_to_csv(labels, trace: GNTrace) -> str:
    """`step,removed_u,removed_v,modularity` rows in removal order."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["step", "removed_u", "removed_v", "modularity"])
    for step, ((u, v), q) in enumerate(trace.removals, start=1):
        writer.writerow([step, labels[u], labels[v], repr(q)])
    return buf.getvalue()
