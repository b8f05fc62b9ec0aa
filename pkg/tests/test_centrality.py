from __future__ import annotations

import random

import pytest

from commgraph.errors import ConvergenceError, DegenerateGraphError
from commgraph.centrality import (
    MEASURES,
    all_centralities,
    betweenness_centrality,
    centrality_table_csv,
    closeness_centrality,
    degree_centrality,
    harmonic_centrality,
    pagerank,
    rank_top_k,
    _pagerank_sweeps,
)
from commgraph.graph import NodeRecord, build_graph
from conftest import make_graph
from oracles import (
    betweenness_by_enumeration,
    closeness_from_distances,
    harmonic_from_distances,
    pagerank_power_iteration,
    random_graph,
)


def complete_graph(n):
    return make_graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


# ---------------------------------------------------------------- degree


def test_degree_normalization_convention():
    # reference ratios for the N-1 convention at N=183
    expected = {66: 0.36263, 63: 0.346153, 51: 0.280219, 19: 0.104395, 12: 0.065934}
    for raw, value in expected.items():
        assert abs(raw / 182 - value) < 1e-5


def test_degree_triangle_all_one(triangle):
    assert degree_centrality(triangle).scores == (1.0, 1.0, 1.0)


def test_degree_star_leaves(star4):
    vec = degree_centrality(star4)
    assert vec.scores[1] == pytest.approx(1 / 3)
    assert vec.scores[0] == 1.0


def test_degree_raw_counts(star4):
    assert degree_centrality(star4, normalized=False).scores == (3.0, 1.0, 1.0, 1.0)


def test_degree_single_node_degenerate():
    g = make_graph(1, [])
    with pytest.raises(DegenerateGraphError):
        degree_centrality(g)


# ----------------------------------------------------------- betweenness


def test_betweenness_path_middle(path3):
    vec = betweenness_centrality(path3)
    assert vec.scores == (0.0, 1.0, 0.0)
    raw = betweenness_centrality(path3, normalized=False)
    assert raw.scores[1] == 1.0


def test_betweenness_triangle_zero(triangle):
    assert betweenness_centrality(triangle).scores == (0.0, 0.0, 0.0)


def test_betweenness_star_center(star4):
    raw = betweenness_centrality(star4, normalized=False)
    assert raw.scores[0] == 3.0
    assert betweenness_centrality(star4).scores[0] == 1.0


# ------------------------------------------------------------- closeness


def test_closeness_path(path3):
    vec = closeness_centrality(path3)
    assert vec.scores[1] == 1.0
    assert vec.scores[0] == pytest.approx(2 / 3)


def test_closeness_complete_graph():
    vec = closeness_centrality(complete_graph(5))
    assert all(s == 1.0 for s in vec.scores)


def test_closeness_raw_is_inverse_distance_sum(path3):
    raw = closeness_centrality(path3, normalized=False)
    assert raw.scores == (pytest.approx(1 / 3), 0.5, pytest.approx(1 / 3))


def test_closeness_isolated_node_zero_with_warning(caplog):
    g = make_graph(3, [(0, 1)])
    with caplog.at_level("WARNING"):
        vec = closeness_centrality(g)
    assert vec.scores[2] == 0.0
    assert "isolated" in caplog.text


# -------------------------------------------------------------- harmonic


def test_harmonic_path_end(path3):
    vec = harmonic_centrality(path3)
    assert vec.scores[0] == pytest.approx(1.5 / 2)
    raw = harmonic_centrality(path3, normalized=False)
    assert raw.scores[0] == pytest.approx(1.5)


def test_harmonic_complete_graph():
    assert all(s == 1.0 for s in harmonic_centrality(complete_graph(4)).scores)


def test_harmonic_two_disjoint_edges():
    g = make_graph(4, [(0, 1), (2, 3)])
    assert all(s == pytest.approx(1 / 3) for s in harmonic_centrality(g).scores)


# -------------------------------------------------------------- pagerank


def test_pagerank_cycle_uniform():
    g = make_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    vec = pagerank(g)
    assert all(abs(s - 0.25) < 1e-12 for s in vec.scores)


def test_pagerank_k2_symmetric():
    g = make_graph(2, [(0, 1)])
    assert pagerank(g).scores == pytest.approx((0.5, 0.5))


def test_pagerank_star_fixed_point(star4):
    vec = pagerank(star4)
    assert vec.scores[0] == pytest.approx(0.47973, abs=1e-4)
    for leaf in (1, 2, 3):
        assert vec.scores[leaf] == pytest.approx(0.17342, abs=1e-4)


def test_pagerank_sums_to_one_every_iteration(star4):
    for sweep in _pagerank_sweeps(star4, damping=0.85, max_iter=50):
        assert abs(sum(sweep.scores) - 1.0) < 1e-9


def test_pagerank_handles_isolated_nodes():
    g = make_graph(3, [(0, 1)])
    vec = pagerank(g)
    assert abs(sum(vec.scores) - 1.0) < 1e-9
    assert all(0 < s < 1 for s in vec.scores)


def test_pagerank_raw_form_scales_by_n(star4):
    unit = pagerank(star4)
    raw = pagerank(star4, normalized=False)
    for a, b in zip(raw.scores, unit.scores):
        assert a == pytest.approx(4 * b, abs=1e-12)


def test_pagerank_bad_damping_rejected(star4):
    with pytest.raises(ValueError):
        pagerank(star4, damping=1.0)


def test_pagerank_nonconvergence_carries_residual(star4):
    with pytest.raises(ConvergenceError) as exc:
        pagerank(star4, tol=1e-15, max_iter=3)
    assert exc.value.residual > 0


# ------------------------------------------------------- oracle sweeps


def test_all_measures_match_oracles_on_random_graphs():
    rng = random.Random(101)
    for _ in range(60):
        g = random_graph(rng)
        n = g.node_count
        deg = degree_centrality(g).scores
        assert deg == tuple(g.degree(v) / (n - 1) for v in range(n))
        bet = betweenness_centrality(g).scores
        for got, want in zip(bet, betweenness_by_enumeration(g)):
            assert abs(got - want) <= 1e-9
        clo = closeness_centrality(g).scores
        for got, want in zip(clo, closeness_from_distances(g)):
            assert abs(got - want) <= 1e-9
        har = harmonic_centrality(g).scores
        for got, want in zip(har, harmonic_from_distances(g)):
            assert abs(got - want) <= 1e-9
        pr = pagerank(g).scores
        for got, want in zip(pr, pagerank_power_iteration(g)):
            assert abs(got - want) <= 1e-9


def test_label_invariance_under_relabeling():
    rng = random.Random(103)
    for _ in range(20):
        g = random_graph(rng)
        n = g.node_count
        perm = list(range(n))
        rng.shuffle(perm)  # perm[old] = new id
        records = [None] * n
        for old, new in enumerate(perm):
            records[new] = NodeRecord(label=f"n{old}")
        labels = [r.label for r in records]
        edges = [(labels[perm[u]], labels[perm[v]], w) for u, v, w in g.edges()]
        g2, _ = build_graph(records, edges)
        for measure, vec in all_centralities(g).items():
            vec2 = all_centralities(g2)[measure]
            for old in range(n):
                assert vec.scores[old] == pytest.approx(vec2.scores[perm[old]], abs=1e-12)


def test_vertex_transitive_graphs_are_constant():
    cycle6 = make_graph(6, [(i, (i + 1) % 6) for i in range(6)])
    for g in (cycle6, complete_graph(5)):
        for vec in all_centralities(g).values():
            assert max(vec.scores) - min(vec.scores) < 1e-12


# ------------------------------------------------------------- rankings


def test_rank_top_k_basic():
    vec = degree_centrality(make_graph(2, [(0, 1)]), normalized=False)
    vec = vec.__class__("degree", (0.3, 0.7), False)
    assert rank_top_k(vec, 1, ["A", "B"]) == [("B", 0.7)]


def test_rank_top_k_tie_breaks_by_label():
    vec = degree_centrality(make_graph(2, [(0, 1)]))
    assert rank_top_k(vec, 2, ["B", "A"]) == [("A", 1.0), ("B", 1.0)]


def test_rank_top_k_clamps_to_n():
    from commgraph.centrality import CentralityVector

    vec = CentralityVector("degree", (1.0, 2.0, 3.0), False)
    out = rank_top_k(vec, 5, ["A", "B", "C"])
    assert out == [("C", 3.0), ("B", 2.0), ("A", 1.0)]


def test_centrality_csv_shape(star4):
    text = centrality_table_csv(star4, all_centralities(star4))
    lines = text.strip().split("\n")
    assert lines[0] == "label," + ",".join(MEASURES)
    assert len(lines) == 5
    assert lines[1].startswith("A,1,1,1,1,")  # center first by label sort
