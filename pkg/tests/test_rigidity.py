import itertools

import numpy as np
import pytest

from stresslab.exactla import QQ
from stresslab.rigidity import (Framework, Graph, all_graphs, graph_corpus, henneberg, is_laman,
                                is_laman_bruteforce, is_rigid, lefschetz_rigidity_check, parse_edges,
                                random_framework, random_graph, random_henneberg, read_edges, rigidity_matrix,
                                rigidity_rank, write_edges)

TRIANGLE = Graph.from_edges([(0, 1), (1, 2), (0, 2)])
K4 = Graph.from_edges(itertools.combinations(range(1, 5), 2))
K4_TAIL = Graph.from_edges(list(itertools.combinations(range(1, 5), 2)) + [(4, 5), (5, 6), (6, 1)])
C4 = Graph.from_edges([(0, 1), (1, 2), (2, 3), (3, 0)])


def frame(g, pts):
    return Framework(g, QQ.array(np.array(pts, dtype=object).T))


def test_laman_examples():
    assert is_laman(TRIANGLE)
    assert not is_laman(K4)
    assert K4_TAIL.e == 2 * K4_TAIL.n - 3 and not is_laman(K4_TAIL)


def test_pebble_game_matches_bruteforce():
    rng = np.random.default_rng(0)
    for n in range(2, 11):
        for _ in range(15):
            e = int(rng.integers(0, min(2 * n, n * (n - 1) // 2) + 1))
            g = random_graph(n, e, rng)
            assert is_laman(g) == is_laman_bruteforce(g), g.sorted_edges()
    for g in all_graphs(5, 7):
        assert is_laman(g) == is_laman_bruteforce(g)


def test_rigidity_rank_examples():
    assert rigidity_rank(frame(TRIANGLE, [(0, 0), (3, 1), (1, 5)])) == 3
    assert is_rigid(frame(TRIANGLE, [(0, 0), (3, 1), (1, 5)]))
    assert rigidity_rank(frame(C4, [(0, 0), (4, 1), (5, 6), (-1, 3)])) == 4
    collinear = frame(TRIANGLE, [(0, 0), (1, 1), (2, 2)])
    assert rigidity_rank(collinear) == 2 and not is_rigid(collinear)


def test_rigidity_matrix_rows():
    m = rigidity_matrix(frame(Graph.from_edges([(0, 1)]), [(1, 2), (4, 7)]))
    assert list(m[0]) == [-3, -5, 3, 5]


def test_framework_rejects_coincident_endpoints():
    with pytest.raises(ValueError):
        frame(Graph.from_edges([(0, 1)]), [(1, 1), (1, 1)])


def test_random_framework_is_seeded():
    a = random_framework(K4_TAIL, seed=3)
    assert np.array_equal(a.coords, random_framework(K4_TAIL, seed=3).coords)
    assert np.abs(np.array(a.coords, dtype=float)).max() <= 10**4


def test_lefschetz_bridge_triangle():
    br = lefschetz_rigidity_check(TRIANGLE, seed=0)
    assert br.lefschetz and br.dims == (1, 1) and br.rank == 1 and br.consistent


def test_lefschetz_bridge_non_laman():
    br = lefschetz_rigidity_check(K4_TAIL, seed=0)
    assert not br.laman and not br.rigid and not br.lefschetz and br.consistent


def test_lefschetz_bridge_edge_count():
    with pytest.raises(ValueError):
        lefschetz_rigidity_check(C4)


def test_henneberg_moves():
    edge = Graph.from_edges([(0, 1)])
    tri = henneberg(edge, 1, (0, 1))
    assert tri.n == 3 and tri.e == 3
    k4e = henneberg(tri, 1, (0, 1))
    assert (k4e.n, k4e.e) == (4, 5) and is_laman(k4e)
    m2 = henneberg(k4e, 2, ((0, 1), 2))
    assert (m2.n, m2.e) == (5, 7) and frozenset((0, 1)) not in m2.edges and is_laman(m2)
    with pytest.raises(ValueError):
        henneberg(edge, 1, (0, 0))
    with pytest.raises(ValueError):
        henneberg(tri, 2, ((0, 5), 2))
    with pytest.raises(ValueError):
        henneberg(edge, 3, (0, 1))


def test_henneberg_closure():
    for s in range(100):
        g = random_henneberg(1 + s % 7, seed=s)
        assert is_laman(g)


def test_henneberg_graphs_pass_bridge():
    for s in range(5):
        br = lefschetz_rigidity_check(random_henneberg(4, seed=s), seed=s)
        assert br.laman and br.lefschetz and br.rigid


def test_small_corpus_consistent():
    corpus = graph_corpus(max_n=6, sample=60, seed=1)
    assert all(g.e == 2 * g.n - 3 for g in corpus)
    assert all(lefschetz_rigidity_check(g, seed=2).consistent for g in corpus)


def test_isolated_vertices_kept():
    g = Graph.from_edges([(0, 1), (1, 2), (0, 2)], vertices=range(4))
    assert g.n == 4 and g.complex().n == 4


def test_edge_list_io(tmp_path):
    g = parse_edges("# comment\n0 1\n1 2\n\n2 0\n")
    assert g.e == 3 and is_laman(g)
    p = tmp_path / "g.edges"
    write_edges(K4_TAIL, p)
    assert read_edges(p).edges == K4_TAIL.edges
    with pytest.raises(ValueError):
        parse_edges("0 1 2\n")
