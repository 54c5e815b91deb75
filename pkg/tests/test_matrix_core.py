from __future__ import annotations

from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from twinwidth.errors import StructuralError
from twinwidth.graph_core import path_graph
from twinwidth.matrix_core import (
    Division, OrderedMatrix, adjacency_matrix, compose, inverse, quotient_matrix, read_matrix,
    substitute, superpose, tensor, write_matrix,
)

# 6x5 figure matrix, transcribed row by row (column positions of the ones)
FIG_ROWS = [{1, 4}, {0, 2}, {1, 3, 4}, {2, 3}, {0, 1, 4}, {1, 2, 3, 4}]
FIG = OrderedMatrix(6, 5, [(i, j) for i, r in enumerate(FIG_ROWS) for j in sorted(r)])


def test_figure_transcription():
    assert len(FIG.ones) == 16
    assert FIG.row_degrees() == [2, 2, 3, 2, 3, 4]


def test_quotient_examples():
    M = FIG
    assert quotient_matrix(M, Division.singletons(6, 5)) == M
    assert quotient_matrix(M, Division.trivial(6, 5)) == OrderedMatrix.all_ones(1, 1)
    assert quotient_matrix(OrderedMatrix.zeros(3, 3), Division.trivial(3, 3)).ones == frozenset()


def test_division_validation():
    with pytest.raises(StructuralError):
        Division(4, 4, [0])
    with pytest.raises(StructuralError):
        Division(4, 4, [2, 2])
    with pytest.raises(StructuralError):
        Division(4, 4, [], [4])
    with pytest.raises(StructuralError):
        quotient_matrix(FIG, Division(5, 5))


def test_superpose_examples():
    I2, A2 = OrderedMatrix.identity(2), OrderedMatrix.reverse(2)
    assert superpose([FIG, OrderedMatrix.zeros(6, 5)]) == FIG
    assert superpose([FIG, FIG]) == FIG
    assert superpose([I2, A2]) == OrderedMatrix.all_ones(2, 2)
    with pytest.raises(StructuralError):
        superpose([I2, OrderedMatrix.identity(3)])
    with pytest.raises(StructuralError):
        superpose([])


def test_substitute_examples():
    P = OrderedMatrix.from_perm([2, 0, 1])
    assert substitute(P, {(a, b): OrderedMatrix.all_ones(1, 1) for a, b in P.ones}) == P
    I2 = OrderedMatrix.identity(2)
    assert substitute(I2, {(0, 0): I2, (1, 1): I2}) == OrderedMatrix.identity(4)
    I3 = OrderedMatrix.identity(3)
    assert substitute(I3, {(a, a): I2 for a in range(3)}) == OrderedMatrix.identity(6)
    with pytest.raises(StructuralError):
        substitute(I2, {(0, 0): I2})


def test_substitute_uneven_blocks():
    P = OrderedMatrix.from_perm([1, 0])
    B0 = OrderedMatrix.identity(3)   # rows 0..2, column group 1
    B1 = OrderedMatrix.reverse(2)    # rows 3..4, column group 0
    S = substitute(P, {(0, 1): B0, (1, 0): B1})
    assert S.shape == (5, 5)
    assert S.as_perm() == [2, 3, 4, 1, 0]


def test_tensor_matches_kron():
    rng = np.random.default_rng(3)
    for _ in range(20):
        a = rng.random((3, 2)) < 0.5
        b = rng.random((2, 4)) < 0.5
        T = tensor(OrderedMatrix.from_array(a), OrderedMatrix.from_array(b))
        assert np.array_equal(T.array(), np.kron(a, b).astype(bool))


def perms(n):
    from itertools import permutations
    return [OrderedMatrix.from_perm(list(p)) for p in permutations(range(n))]


def test_compose_examples():
    for M in perms(3):
        I = OrderedMatrix.identity(3)
        assert compose(I, M) == M
        assert compose(M, I) == M
        assert compose(M, inverse(M)) == I
    R = OrderedMatrix.reverse(5)
    assert compose(R, R) == OrderedMatrix.identity(5)
    with pytest.raises(StructuralError):
        compose(OrderedMatrix.identity(2), OrderedMatrix.identity(3))


def test_compose_is_function_composition_and_associative():
    ps = perms(3)
    for A, B, C in product(ps, repeat=3):
        assert compose(compose(A, B), C) == compose(A, compose(B, C))
        f, g = A.as_perm(), B.as_perm()
        assert compose(A, B).as_perm() == [g[f[x]] for x in range(3)]


def test_quotient_monotone_under_refinement():
    rng = np.random.default_rng(11)
    for _ in range(200):
        r, c = rng.integers(1, 6, size=2)
        M = OrderedMatrix.from_array(rng.random((r, c)) < 0.3)
        fine_r = sorted(set(rng.integers(1, max(r, 2), size=3)) & set(range(1, r)))
        fine_c = sorted(set(rng.integers(1, max(c, 2), size=3)) & set(range(1, c)))
        coarse_r = [p for p in fine_r if rng.random() < 0.5]
        coarse_c = [p for p in fine_c if rng.random() < 0.5]
        Df, Dc = Division(r, c, fine_r, fine_c), Division(r, c, coarse_r, coarse_c)
        Qf, Qc = quotient_matrix(M, Df), quotient_matrix(M, Dc)
        # a coarse zone is non-zero iff some fine zone inside it is
        for i, j in product(range(Qc.nrows), range(Qc.ncols)):
            inside = [(a, b) for a, b in Qf.ones
                      if Dc.row_part(Df.row_intervals()[a][0]) == i and Dc.col_part(Df.col_intervals()[b][0]) == j]
            assert ((i, j) in Qc.ones) == bool(inside)


@st.composite
def permutation_lists(draw, lo=1, hi=4):
    n = draw(st.integers(lo, hi))
    return draw(st.permutations(list(range(n))))


@given(permutation_lists(), st.data())
@settings(max_examples=80, deadline=None)
def test_substitution_of_bijections_is_bijection(f, data):
    Mf = OrderedMatrix.from_perm(f)
    blocks = {(a, f[a]): OrderedMatrix.from_perm(data.draw(permutation_lists(1, 3))) for a in range(len(f))}
    # bijection blocks must be square; row group and column group sizes then agree
    S = substitute(Mf, blocks)
    assert S.is_bijection()


def test_adjacency_matrix_respects_order():
    G = path_graph(3)
    A = adjacency_matrix(G, [1, 0, 2])
    assert A.ones == {(0, 1), (1, 0), (0, 2), (2, 0)}
    assert A.rows == (1, 0, 2)


def test_matrix_text_round_trip():
    text = "3 4\n2 3\n0 0\n1 2\n"
    assert write_matrix(read_matrix(text)) == text
    assert write_matrix(FIG) == write_matrix(read_matrix(write_matrix(FIG)))
    with pytest.raises(StructuralError):
        read_matrix("2 2\n0 5\n")
    with pytest.raises(StructuralError):
        read_matrix("2 2\n0 1\n0 1\n")


@given(st.integers(0, 5), st.integers(0, 5), st.data())
@settings(max_examples=60, deadline=None)
def test_matrix_text_round_trip_property(r, c, data):
    cells = [(i, j) for i in range(r) for j in range(c)]
    ones = data.draw(st.lists(st.sampled_from(cells), unique=True) if cells else st.just([]))
    M = OrderedMatrix(r, c, ones)
    text = write_matrix(M)
    assert write_matrix(read_matrix(text)) == text
    assert read_matrix(text) == M
