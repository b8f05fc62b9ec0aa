from __future__ import annotations

import pytest

from commgraph.graph import NodeRecord, build_graph


def make_graph(n: int, pairs, weights=None):
    """Small-graph helper: nodes A, B, C, ... plus integer-id edge pairs."""
    labels = [chr(ord("A") + i) for i in range(n)]
    records = [NodeRecord(label=lab) for lab in labels]
    if weights is None:
        edges = [(labels[u], labels[v]) for u, v in pairs]
    else:
        edges = [(labels[u], labels[v], w) for (u, v), w in zip(pairs, weights)]
    g, _ = build_graph(records, edges)
    return g


@pytest.fixture
def triangle():
    return make_graph(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def path3():
    # A - B - C
    return make_graph(3, [(0, 1), (1, 2)])


@pytest.fixture
def star4():
    # center A with leaves B, C, D
    return make_graph(4, [(0, 1), (0, 2), (0, 3)])


@pytest.fixture
def two_triangles():
    return make_graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])


@pytest.fixture
def barbell():
    # two K3s joined by the bridge (2, 3)
    return make_graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
