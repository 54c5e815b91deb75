from __future__ import annotations

import networkx as nx
import numpy as np
import pytest

from twinwidth.calculus import (
    compose_lift, grid_in_component, joint_matrix, power_lift,
    quotient_lift, quotient_lift_guarantee, regular_embedding_lift, restrict_partition_sequence,
    substitute_sequences, superposition_gn_bound, tensor_width,
)
from twinwidth.graph_core import (
    OrderedGraph, VertexPartition, complete_graph, cycle_graph, graph_power, path_graph, quotient_graph,
)
from twinwidth.grids import contains_k_grid, grid_number_matrix
from twinwidth.matrix_core import OrderedMatrix, superpose, tensor
from twinwidth.width import (
    stww_graph_exact, stww_matrix_exact, verify_division_sequence,
    verify_partition_sequence,
)


def exact(M):
    return stww_matrix_exact(M)


def rand_perm(rng, n):
    return OrderedMatrix.from_perm([int(x) for x in rng.permutation(n)])


def test_substitution_with_unit_blocks_keeps_width():
    P = OrderedMatrix.from_perm([2, 0, 3, 1])
    w, c = exact(P)
    one = OrderedMatrix.identity(1)
    _, oc = exact(one)
    S, res = substitute_sequences(P, c, {pos: one for pos in P.ones}, {pos: oc for pos in P.ones})
    assert S == P and res.width == w


def test_identity_tensor_identity():
    I2 = OrderedMatrix.identity(2)
    _, c = exact(I2)
    S, res = substitute_sequences(I2, c, {(0, 0): I2, (1, 1): I2}, {(0, 0): c, (1, 1): c})
    assert S == OrderedMatrix.identity(4) and res.width == 2


def test_substitution_equality_random():
    rng = np.random.default_rng(0)
    for _ in range(25):
        Mf = rand_perm(rng, 3)
        f = Mf.as_perm()
        blocks = {(a, f[a]): rand_perm(rng, int(rng.integers(1, 4))) for a in range(3)}
        certs = {pos: exact(B)[1] for pos, B in blocks.items()}
        wf, cf = exact(Mf)
        S, res = substitute_sequences(Mf, cf, blocks, certs)
        want = max([wf] + [exact(B)[0] for B in blocks.values()])
        assert res.width <= res.bound == want
        assert exact(S)[0] == want


def test_tensor_examples():
    I2 = OrderedMatrix.identity(2)
    c = exact(I2)[1]
    M, res = tensor_width([(I2, c)])
    assert M == I2 and res.width == 2
    M, res = tensor_width([(I2, c)] * 3)
    assert M == OrderedMatrix.identity(8) and res.width == 2
    R2, R3 = OrderedMatrix.reverse(2), OrderedMatrix.reverse(3)
    M, res = tensor_width([(R2, exact(R2)[1]), (R3, exact(R3)[1])])
    assert M == tensor(R2, R3)
    assert exact(M)[0] == max(exact(R2)[0], exact(R3)[0]) == res.width


def test_superposition_examples():
    A = OrderedMatrix.identity(4)
    B = OrderedMatrix(4, 4, [(0, 1), (1, 2), (2, 3)])
    bound, holds, g = superposition_gn_bound([A, B], 2)
    assert bound == 16 and holds
    M = OrderedMatrix.from_perm([1, 0, 3, 2])
    bound, holds, g = superposition_gn_bound([M, OrderedMatrix.zeros(4, 4)], 3)
    assert holds and g == grid_number_matrix(M)
    with pytest.raises(ValueError):
        superposition_gn_bound([OrderedMatrix.all_ones(2, 2), OrderedMatrix.identity(2)], 2)


def test_grid_in_component_extracts_subgrid():
    rng = np.random.default_rng(4)
    for _ in range(5):
        split = rng.integers(0, 2, size=(16, 16))
        A = OrderedMatrix.from_array(split == 0)
        B = OrderedMatrix.from_array(split == 1)
        w = contains_k_grid(superpose([A, B]), 16)
        i, sub = grid_in_component([A, B], w, 2)
        assert contains_k_grid([A, B][i], 2) is not None


def test_quotient_lift_examples():
    P4 = path_graph(4)
    P = VertexPartition.singletons(4)
    w, c = stww_graph_exact(P4)
    res = quotient_lift(c, P4, P, 1)
    assert res.width == w
    P = VertexPartition(4, [[0, 1], [2, 3]])
    wq, cq = stww_graph_exact(quotient_graph(P4, P))
    assert wq == 1
    res = quotient_lift(cq, P4, P)
    assert res.width <= 2 * wq
    with pytest.raises(ValueError):
        quotient_lift(cq, P4, P, 1)


def test_quotient_lift_on_complete_graph_exceeds_multiplicative_bound():
    """Collapsing K4 onto K2 by pairs: the multiplicative bound 2 * 1 is below stww(K4) = 3."""
    K4 = complete_graph(4)
    P = VertexPartition(4, [[0, 1], [2, 3]])
    wq, cq = stww_graph_exact(quotient_graph(K4, P))
    res = quotient_lift(cq, K4, P)
    assert (wq, res.bound, res.width, stww_graph_exact(K4)[0]) == (1, 2, 3, 3)
    assert res.width <= quotient_lift_guarantee(K4, P, wq)


def test_quotient_lift_meets_construction_guarantee():
    rng = np.random.default_rng(9)
    for s in range(60):
        g = nx.gnp_random_graph(8, 0.4, seed=s)
        G = OrderedGraph(8, g.edges())
        perm = rng.permutation(8)
        P = VertexPartition(8, [perm[2 * i:2 * i + 2] for i in range(4)])
        wq, cq = stww_graph_exact(quotient_graph(G, P))
        res = quotient_lift(cq, G, P)
        assert res.width <= quotient_lift_guarantee(G, P, wq)


def test_power_lift_examples():
    P4 = path_graph(4)
    w, c = stww_graph_exact(P4)
    assert power_lift(c, P4, 1).width == w
    res = power_lift(c, P4, 2)
    assert w == 2 and res.width <= 4
    assert verify_partition_sequence(graph_power(P4, 2), res.cert) == res.width
    C6 = cycle_graph(6)
    w, c = stww_graph_exact(C6)
    assert w == 2 and power_lift(c, C6, 2).width <= 4


def test_compose_lift_examples():
    I = OrderedMatrix.identity(4)
    wj, cj = exact(joint_matrix(I, I))
    C, res = compose_lift(cj, I, I)
    assert C == I and res.width <= wj ** 2
    R = OrderedMatrix.reverse(4)
    wj, cj = exact(joint_matrix(R, R))
    C, res = compose_lift(cj, R, R)
    assert C == OrderedMatrix.identity(4)
    assert verify_division_sequence(C, res.cert) == res.width <= wj ** 2


def test_joint_matrix_layout():
    s = OrderedMatrix.from_perm([1, 2, 0])
    t = OrderedMatrix.from_perm([2, 0, 1])
    J = joint_matrix(s, t)
    assert J.shape == (6, 3)
    assert J.submatrix(range(3), range(3)) == s
    assert J.submatrix(range(3, 6), range(3)) == t.transpose()


def test_regular_embedding_examples():
    G = path_graph(4)
    w, c = stww_graph_exact(G)
    res = regular_embedding_lift(G, G, list(range(4)), 1, c)
    assert res.width == w
    # P4 folded 2-to-1 onto P2
    P2 = path_graph(2)
    w2, c2 = stww_graph_exact(P2)
    res = regular_embedding_lift(path_graph(4), P2, [0, 0, 1, 1], 2, c2)
    assert res.bound == 2 * w2 ** 2 and res.width <= res.bound
    # subgraph inclusion
    H = OrderedGraph(4, [(0, 1), (2, 3)])
    res = regular_embedding_lift(H, complete_graph(4), [0, 1, 2, 3], 1, stww_graph_exact(complete_graph(4))[1])
    assert res.width <= 3


def test_regular_embedding_rejects_bad_maps():
    G = path_graph(4)
    c = stww_graph_exact(G)[1]
    with pytest.raises(ValueError, match="Lipschitz"):
        regular_embedding_lift(OrderedGraph(2, [(0, 1)]), G, [0, 3], 2, c)
    with pytest.raises(ValueError, match="fibre"):
        regular_embedding_lift(OrderedGraph(3), G, [0, 0, 0], 2, c)


def test_restrict_and_lift_helpers_produce_valid_sequences():
    rng = np.random.default_rng(2)
    for s in range(30):
        g = nx.gnp_random_graph(7, 0.5, seed=s)
        G = OrderedGraph(7, g.edges())
        w, c = stww_graph_exact(G)
        keep = sorted(int(v) for v in rng.choice(7, 4, replace=False))
        R = restrict_partition_sequence(c, keep)
        assert verify_partition_sequence(G.induced(keep), R) <= w
