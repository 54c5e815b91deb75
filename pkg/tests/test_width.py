from __future__ import annotations

import networkx as nx
import numpy as np
import pytest

from twinwidth.errors import CertificateInvalid, RefusalError, SolverTimeout
from twinwidth.graph_core import OrderedGraph, complete_graph, cycle_graph, path_graph, star_graph
from twinwidth.matrix_core import OrderedMatrix
from twinwidth.width import (
    DivisionSequence, PartitionSequence, SearchBudget, certificate_from_json, oracle_stww,
    oracle_stww_graphs, oracle_stww_matrices, stww_graph_exact, stww_matrix_exact,
    stww_upper_heuristic, verify_division_sequence, verify_partition_sequence,
)

# frozen from the exhaustive oracle
C5_STWW = 2
P3_STWW = 2
I3_STWW = 2


def test_verify_examples():
    assert verify_partition_sequence(OrderedGraph(1), PartitionSequence(1, (), 0)) == 0
    assert verify_partition_sequence(complete_graph(2), PartitionSequence(2, ((0, 1),), 0)) == 1
    star = star_graph(3)
    assert verify_partition_sequence(star, PartitionSequence(4, ((1, 2), (1, 3), (0, 1)), 0)) == 3


def test_verify_rejects_bad_steps():
    G = path_graph(3)
    with pytest.raises(CertificateInvalid) as exc:
        verify_partition_sequence(G, PartitionSequence(3, ((0, 1), (1, 2)), 0))
    assert exc.value.step == 1
    with pytest.raises(CertificateInvalid):
        verify_partition_sequence(G, PartitionSequence(3, ((0, 1),), 0))
    M = OrderedMatrix.identity(3)
    with pytest.raises(CertificateInvalid):
        verify_division_sequence(M, DivisionSequence((3, 3), (("row", 1), ("row", 1), ("col", 1), ("col", 2)), 0))
    with pytest.raises(CertificateInvalid):
        verify_division_sequence(M, DivisionSequence((3, 3), (("diag", 1), ("row", 2), ("col", 1), ("col", 2)), 0))


def test_division_verifier_matches_direct_quotients():
    from twinwidth.matrix_core import Division, quotient_matrix

    rng = np.random.default_rng(2)
    for _ in range(100):
        r, c = rng.integers(1, 7, size=2)
        M = OrderedMatrix.from_array(rng.random((r, c)) < 0.4)
        moves = [("row", p) for p in range(1, r)] + [("col", p) for p in range(1, c)]
        rng.shuffle(moves)
        moves = [tuple((str(a), int(p))) for a, p in moves]
        rc, cc = set(range(1, r)), set(range(1, c))
        direct = quotient_matrix(M, Division(r, c, sorted(rc), sorted(cc))).max_degree()
        for ax, p in moves:
            (rc if ax == "row" else cc).discard(p)
            direct = max(direct, quotient_matrix(M, Division(r, c, sorted(rc), sorted(cc))).max_degree())
        assert verify_division_sequence(M, DivisionSequence((r, c), tuple(moves), 0)) == direct


def test_graph_exact_examples():
    assert stww_graph_exact(star_graph(3))[0] == 3
    assert stww_graph_exact(OrderedGraph(1))[0] == 0
    assert stww_graph_exact(OrderedGraph(0))[0] == 0
    assert stww_graph_exact(cycle_graph(5))[0] == C5_STWW


def test_matrix_exact_examples():
    for n in range(2, 9):
        assert stww_matrix_exact(OrderedMatrix.identity(n))[0] == 2
        assert stww_matrix_exact(OrderedMatrix.reverse(n))[0] == 2
    for n in range(3, 9):
        shift = OrderedMatrix(n, n, [(i, i + 1) for i in range(n - 1)])
        assert stww_matrix_exact(shift)[0] == 2
    assert stww_matrix_exact(OrderedMatrix.zeros(3, 4))[0] == 0
    assert stww_matrix_exact(OrderedMatrix.identity(1))[0] == 1


def test_oracle_examples():
    assert oracle_stww(complete_graph(2)) == 1
    assert oracle_stww(path_graph(3)) == P3_STWW
    assert oracle_stww(OrderedMatrix.identity(3)) == I3_STWW
    assert oracle_stww(cycle_graph(5)) == C5_STWW
    with pytest.raises(RefusalError):
        oracle_stww(path_graph(9))
    with pytest.raises(RefusalError):
        oracle_stww(OrderedMatrix.identity(7))


def brute_force_sequences(G):
    """Independent recursion over every merge order (n <= 5)."""
    from twinwidth.graph_core import VertexPartition, quotient_graph

    def rec(parts):
        d = quotient_graph(G, VertexPartition(G.n, parts)).max_degree()
        if len(parts) == 1:
            return d
        best = None
        for i in range(len(parts)):
            for j in range(i + 1, len(parts)):
                nxt = [p for t, p in enumerate(parts) if t not in (i, j)] + [parts[i] + parts[j]]
                v = rec(nxt)
                best = v if best is None else min(best, v)
        return max(d, best)

    return rec([[v] for v in range(G.n)])


def test_oracle_agrees_with_plain_recursion():
    for G in [cycle_graph(5), path_graph(5), complete_graph(4), star_graph(4),
              OrderedGraph(5, [(0, 1), (1, 2), (2, 0), (3, 4)])]:
        assert oracle_stww(G) == brute_force_sequences(G)


def test_exact_matches_oracle_on_connected_graphs(connected_small_graphs):
    by_n = {}
    for G in connected_small_graphs:
        by_n.setdefault(G.n, []).append(G)
    for n, gs in by_n.items():
        for G, want in zip(gs, oracle_stww_graphs(gs)):
            w, cert = stww_graph_exact(G)
            assert w == want
            assert verify_partition_sequence(G, cert) == w == cert.claimed_width
            assert w >= G.max_degree()


def test_exact_matches_oracle_on_random_matrices():
    rng = np.random.default_rng(7)
    dens = rng.uniform(0.1, 0.6, size=(120, 1, 1))
    arrs = rng.random((120, 5, 6)) < dens
    for a, want in zip(arrs, oracle_stww_matrices(arrs)):
        M = OrderedMatrix.from_array(a)
        w, cert = stww_matrix_exact(M)
        assert w == want == verify_division_sequence(M, cert)


def test_trees_have_width_max_degree():
    for s in range(60):
        n = 2 + s % 11
        T = nx.random_labeled_tree(n, seed=s)
        G = OrderedGraph(n, T.edges())
        assert stww_graph_exact(G)[0] == G.max_degree()


def test_heuristic_is_certified_upper_bound():
    w, cert = stww_upper_heuristic(star_graph(3))
    assert w >= 3 and verify_partition_sequence(star_graph(3), cert) == w
    w, cert = stww_upper_heuristic(OrderedMatrix.identity(4))
    assert w >= 2 and verify_division_sequence(OrderedMatrix.identity(4), cert) == w
    for s in range(8):
        g = nx.random_regular_graph(3, 12, seed=s)
        G = OrderedGraph(12, g.edges())
        hw, hc = stww_upper_heuristic(G)
        ew, _ = stww_graph_exact(G)
        assert hw >= ew
        assert verify_partition_sequence(G, hc) == hw


def test_heuristic_on_large_sparse_graph():
    g = nx.random_regular_graph(3, 300, seed=1)
    G = OrderedGraph(300, g.edges())
    w, cert = stww_upper_heuristic(G)
    assert verify_partition_sequence(G, cert) == w >= 3


def test_timeout_carries_certified_bound():
    g = nx.random_regular_graph(4, 14, seed=3)
    G = OrderedGraph(14, g.edges())
    try:
        w, cert = stww_graph_exact(G, SearchBudget(nodes=1))
    except SolverTimeout as exc:
        assert exc.best_certificate is not None
        assert verify_partition_sequence(G, exc.best_certificate) == exc.best_width
    else:
        assert verify_partition_sequence(G, cert) == w


def test_certificate_json_round_trip():
    w, cert = stww_graph_exact(cycle_graph(6))
    back = certificate_from_json(cert.to_json())
    assert back == cert
    w, cert = stww_matrix_exact(OrderedMatrix.reverse(4))
    assert certificate_from_json(cert.to_json()) == cert


def test_worker_count_does_not_change_results():
    rng = np.random.default_rng(4)
    for s in range(3):
        g = nx.gnp_random_graph(9, 0.45, seed=s)
        G = OrderedGraph(9, g.edges())
        assert stww_graph_exact(G, workers=1) == stww_graph_exact(G, workers=3)
    M = OrderedMatrix.from_array(rng.random((7, 7)) < 0.35)
    assert stww_matrix_exact(M, workers=1) == stww_matrix_exact(M, workers=3)
