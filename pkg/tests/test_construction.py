from __future__ import annotations

import math
import random
from itertools import combinations

import networkx as nx
import pytest

from twinwidth.construction import (
    C1Graph, c2_conditions, certify_c2, construct, edit_to_c2, generate_sequence, sample_c1, short_cycles,
    tree_parent,
)
from twinwidth.errors import ConstructionAbort, ScheduleError
from twinwidth.graph_core import OrderedGraph, cycle_graph, diameter, path_graph, write_graph

from conftest import nx_to_graph


def brute_cycles(G: OrderedGraph, L: int) -> set:
    """Edge subsets of size <= L forming one cycle: connected, every degree 2."""
    out = set()
    for k in range(2, L + 1):
        for sub in combinations(range(G.m), k):
            deg = {}
            for e in sub:
                for v in G.edges[e]:
                    deg[v] = deg.get(v, 0) + 1
            if any(d != 2 for d in deg.values()):
                continue
            verts = list(deg)
            seen = {verts[0]}
            stack = [verts[0]]
            while stack:
                u = stack.pop()
                for e in sub:
                    a, b = G.edges[e]
                    for x, y in ((a, b), (b, a)):
                        if x == u and y not in seen:
                            seen.add(y)
                            stack.append(y)
            if len(seen) == len(verts):
                out.add(tuple(sorted(sub)))
    return out


def test_sample_small_and_invariants():
    G = sample_c1(2, 0).graph()
    assert G.edges == ((0, 1),) * 3 and G.is_multigraph
    for n in (4, 10, 64):
        G = sample_c1(n, 7).graph()
        deg = [0] * n
        for u, v in G.edges:
            deg[u] += 1
            deg[v] += 1
        assert deg == [3] * n
        assert sorted({lab for lab, _ in G.labels}) == ["1", "2", "3"]
    with pytest.raises(ValueError):
        sample_c1(7, 0)
    with pytest.raises(ValueError):
        C1Graph(4, (((0, 1), (2, 3)), ((0, 1), (2, 3))))


def test_sampling_is_deterministic():
    a = write_graph(sample_c1(512, 3).graph())
    assert a == write_graph(sample_c1(512, 3).graph())
    assert a != write_graph(sample_c1(512, 4).graph())
    assert a != write_graph(sample_c1(512, 3, 1).graph())


def test_short_cycle_examples():
    assert short_cycles(path_graph(6), 10) == []
    assert short_cycles(cycle_graph(4), 4) == [(0, 1, 2, 3)]
    assert short_cycles(cycle_graph(4), 3.9) == []
    dbl = OrderedGraph.multigraph(3, [(0, 1), (1, 0), (1, 2)])
    assert short_cycles(dbl, 2) == [(0, 1)]
    assert short_cycles(dbl, 1.5) == []
    assert len(short_cycles(sample_c1(2, 0).graph(), 2)) == 3


def test_short_cycles_match_brute_force():
    rng = random.Random(0)
    for _ in range(60):
        n = rng.randint(2, 7)
        m = rng.randint(0, 10)
        edges = []
        for _ in range(m):
            u, v = rng.sample(range(n), 2)
            edges.append((u, v))
        G = OrderedGraph.multigraph(n, edges)
        for L in (2, 3, 4, 5):
            assert set(short_cycles(G, L)) == brute_cycles(G, L)


def test_c2_conditions_are_exact_at_the_boundaries():
    # n = 4096: 3 log2 n = 36, log2(n)/4 = 3
    assert c2_conditions(4096, 6, 36, 4) == (True, True, True)
    assert c2_conditions(4096, 7, 37, 3) == (False, False, False)
    # n = 1000: 3 log2 n = 29.897..., log2(n)/4 = 2.49...
    assert c2_conditions(1000, 6, 29, 3)[1:] == (True, True)
    assert c2_conditions(1000, 6, 30, 2)[1:] == (False, False)
    assert c2_conditions(16, 3, math.inf, math.inf)[1:] == (False, True)


def test_tree_layout_has_degree_at_most_three():
    for size in range(1, 200):
        deg = [0] * size
        for i in range(1, size):
            deg[i] += 1
            deg[tree_parent(i)] += 1
            assert tree_parent(i) < i
        assert max(deg) <= 3


def test_bitset_diameter_matches_networkx():
    rng = random.Random(2)
    for _ in range(12):
        n = rng.randint(65, 160)
        g = nx.gnm_random_graph(n, rng.randint(n - 1, 3 * n), seed=rng.randint(0, 10**6))
        G = nx_to_graph(g)
        expect = nx.diameter(g) if nx.is_connected(g) else math.inf
        assert diameter(G) == expect


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_edit_at_4096(seed):
    res = construct(4096, seed)
    c = res.certificate
    assert c.passed and c.max_degree <= 6 and c.diameter <= 36 and c.girth > 3
    n = 4096
    g = math.log2(n) / 4
    assert len(res.deleted) <= 4 * 6 ** g
    assert c.edits == len(res.deleted) + len(res.X) - 1
    assert len(res.X) <= 25 * n ** (7 / 8)
    # deleted edges hit every short cycle, tree only joins far-apart vertices
    H = sample_c1(n, seed, 0).graph()
    assert all(set(cyc) & set(res.deleted) for cyc in short_cycles(H, 3))
    dead = set(res.deleted)
    G2 = nx.MultiGraph()
    G2.add_nodes_from(range(n))
    G2.add_edges_from(e for i, e in enumerate(H.edges) if i not in dead)
    for a, b in combinations(res.X, 2):
        assert not nx.has_path(G2, a, b) or nx.shortest_path_length(G2, a, b) >= 12


def test_edit_is_deterministic():
    a, b = construct(2048, 11), construct(2048, 11)
    assert write_graph(a.graph) == write_graph(b.graph)
    assert a.certificate.to_text() == b.certificate.to_text()


def test_clean_input_needs_no_deletions():
    for seed in range(50):
        C = sample_c1(256, seed)
        if not short_cycles(C.graph(), 2):
            res = edit_to_c2(C)
            assert res.deleted == () and res.certificate.passed
            return
    pytest.fail("no clean sample found")


def test_abort_when_too_many_short_cycles():
    pairs = tuple((2 * i, 2 * i + 1) for i in range(32))
    with pytest.raises(ConstructionAbort) as exc:
        edit_to_c2(C1Graph(64, (pairs, pairs, pairs)))
    assert exc.value.stats["F"] == 64 and exc.value.stats["aborted"]


def test_certify_rejects_bad_graphs():
    assert not certify_c2(OrderedGraph(8, [(0, 1)])).passed
    star = OrderedGraph(8, [(0, i) for i in range(1, 8)])
    c = certify_c2(star)
    assert not c.degree_ok and c.diameter_ok and "FAILED" in c.to_text()


def test_sequence_single_and_pair():
    r = generate_sequence([1024], 0)
    assert len(r.graphs) == 1 and r.graphs[0].certificate.passed
    r = generate_sequence([16, 4096], 0, raise_girth=True)
    g1, g2 = (x.certificate.girth for x in r.graphs)
    assert g2 >= g1 + 6 and all(x.certificate.passed for x in r.graphs)
    assert r.ratio == max(x.certificate.diameter / x.certificate.girth for x in r.graphs)


def test_sequence_errors():
    with pytest.raises(ScheduleError):
        generate_sequence([16, 4096], 0, max_attempts=3)
    with pytest.raises(ValueError):
        generate_sequence([64, 32], 0)
    with pytest.raises(ValueError):
        generate_sequence([15], 0)
