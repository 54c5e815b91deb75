from __future__ import annotations

from itertools import product

import numpy as np
import pytest

from twinwidth.errors import RefusalError
from twinwidth.graph_core import OrderedGraph, complete_graph, cycle_graph, path_graph
from twinwidth.grids import (
    GridWitness, check_witness, contains_k_grid, contains_k_grid_bruteforce, grid_number_graph,
    grid_number_matrix, monochromatic_grid, pattern_bound_guaranteed, points_form_grid,
)
from twinwidth.matrix_core import OrderedMatrix, adjacency_matrix
from twinwidth.width import stww_matrix_exact

from test_matrix_core import FIG

# frozen from exhaustive division enumeration over the transcribed figure matrix
FIG_GRID_NUMBER = 3
# frozen from enumeration of all 5! orders
C5_GRID_NUMBER = 2


def gn_bruteforce(M):
    k = 0
    while contains_k_grid_bruteforce(M, k + 1):
        k += 1
    return k


def test_identity_and_all_ones():
    for n in range(1, 7):
        assert contains_k_grid(OrderedMatrix.identity(n), 2) is None
        assert grid_number_matrix(OrderedMatrix.identity(n)) == 1
        w = contains_k_grid(OrderedMatrix.all_ones(n, n), n)
        assert w is not None and check_witness(OrderedMatrix.all_ones(n, n), w)
    assert grid_number_matrix(OrderedMatrix.zeros(4, 4)) == 0


def test_figure_matrix_grid_number_by_brute_force():
    assert gn_bruteforce(FIG) == FIG_GRID_NUMBER
    assert grid_number_matrix(FIG) == FIG_GRID_NUMBER


def test_agrees_with_division_enumeration():
    rng = np.random.default_rng(21)
    for _ in range(1500):
        r, c = rng.integers(1, 7, size=2)
        M = OrderedMatrix.from_array(rng.random((r, c)) < rng.uniform(0.15, 0.8))
        for k in (1, 2, 3):
            w = contains_k_grid(M, k)
            assert (w is not None) == contains_k_grid_bruteforce(M, k)
            if w is not None:
                assert check_witness(M, w)


def test_witness_point_form_and_json():
    M = OrderedMatrix.all_ones(4, 5)
    w = contains_k_grid(M, 3)
    assert points_form_grid(M, w.points)
    assert GridWitness.from_json(w.to_json()) == w
    bad = GridWitness(2, (1,), (1,), (((0, 0), (0, 1)), ((1, 1), (1, 0))))
    assert not check_witness(OrderedMatrix.all_ones(2, 2), bad)


def test_wide_matrices_use_transpose_route():
    rng = np.random.default_rng(3)
    for _ in range(200):
        M = OrderedMatrix.from_array(rng.random((3, 7)) < 0.5)
        for k in (2, 3):
            w = contains_k_grid(M, k)
            assert (w is not None) == contains_k_grid_bruteforce(M, k)


def test_graph_grid_numbers():
    assert grid_number_graph(OrderedGraph(4))[0] == 0
    assert grid_number_graph(complete_graph(2))[0] == 1
    gn, order = grid_number_graph(cycle_graph(5))
    assert gn == C5_GRID_NUMBER
    assert grid_number_matrix(adjacency_matrix(cycle_graph(5), order)) == gn


def test_graph_exact_against_plain_enumeration_and_heuristic(all_small_graphs):
    from itertools import permutations

    rng = np.random.default_rng(8)
    picks = [all_small_graphs[i] for i in rng.choice(len(all_small_graphs), 10, replace=False)]
    for G in picks:
        want = min(gn_bruteforce(adjacency_matrix(G, p)) for p in permutations(range(G.n)))
        gn, order = grid_number_graph(G)
        assert gn == want
        assert grid_number_graph(G, "heuristic")[0] >= gn


def test_graph_exact_independent_of_workers():
    G = cycle_graph(6)
    assert grid_number_graph(G, workers=1) == grid_number_graph(G, workers=3)


def test_graph_exact_refuses_large():
    with pytest.raises(RefusalError):
        grid_number_graph(path_graph(9))


def is_monochromatic(C, color, rows, cols):
    return all(C[i, j] == color for i, j in product(rows, cols))


def test_monochromatic_examples():
    C = np.ones((16, 16), dtype=int)
    color, rows, cols = monochromatic_grid(C, 2, 2)
    assert (color, rows, cols) == (1, [0, 1], [0, 1])
    color, rows, cols = monochromatic_grid(np.array([[2, 1, 1, 1]] * 4), 2, 1)
    assert len(rows) == len(cols) == 1
    rng = np.random.default_rng(0)
    for _ in range(50):
        C = rng.integers(1, 3, size=(16, 16))
        color, rows, cols = monochromatic_grid(C, 2, 2)
        assert len(set(rows)) == len(set(cols)) == 2
        assert is_monochromatic(C, color, rows, cols)
    for _ in range(5):
        C = rng.integers(1, 3, size=(64, 64))
        color, rows, cols = monochromatic_grid(C, 2, 3)
        assert is_monochromatic(C, color, rows, cols)
    with pytest.raises(RefusalError):
        monochromatic_grid(np.ones((15, 15), dtype=int), 2, 2)


def test_pattern_argument_regime():
    assert all(pattern_bound_guaranteed(2, k) for k in range(1, 6))
    assert all(pattern_bound_guaranteed(3, k) for k in range(1, 6))
    assert not pattern_bound_guaranteed(2, 6)


def test_grid_number_vs_twin_width_envelope():
    """Record the empirical (gn, stww) envelope on sparse matrices; no constant is asserted."""
    rng = np.random.default_rng(13)
    envelope = {}
    for _ in range(300):
        r, c = rng.integers(2, 7, size=2)
        a = rng.random((r, c)) < 0.35
        # keep row and column degree <= 3
        for i in range(r):
            on = np.flatnonzero(a[i])
            a[i, on[3:]] = False
        for j in range(c):
            on = np.flatnonzero(a[:, j])
            a[on[3:], j] = False
        M = OrderedMatrix.from_array(a)
        gn = grid_number_matrix(M)
        w, _ = stww_matrix_exact(M)
        envelope[gn] = max(envelope.get(gn, 0), w)
    print("gn -> max stww observed:", dict(sorted(envelope.items())))
