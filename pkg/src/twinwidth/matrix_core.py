"""Ordered 0-1 matrices, interval divisions and the structural operations on them."""
from __future__ import annotations

from bisect import bisect_right
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import StructuralError


class OrderedMatrix:
    """Immutable 0-1 matrix whose row/column positions are the order.

    ``rows``/``cols`` are optional labels (defaults: positions). ``ones`` is the
    set of ``(i, j)`` positions holding a 1. The order in which entries were
    supplied is remembered only so that the text writer can round-trip files.
    """

    __slots__ = ("nrows", "ncols", "ones", "rows", "cols", "_entry_order", "_arr")

    def __init__(
        self,
        nrows: int,
        ncols: int,
        ones: Iterable[Sequence[int]] = (),
        rows: Optional[Sequence] = None,
        cols: Optional[Sequence] = None,
    ):
        if nrows < 0 or ncols < 0:
            raise StructuralError("negative dimension")
        entries = tuple((int(i), int(j)) for i, j in ones)
        for i, j in entries:
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise StructuralError(f"entry ({i}, {j}) outside {nrows}x{ncols}")
        oneset = frozenset(entries)
        if len(oneset) != len(entries):
            raise StructuralError("repeated entry")
        rows = tuple(range(nrows)) if rows is None else tuple(rows)
        cols = tuple(range(ncols)) if cols is None else tuple(cols)
        if len(rows) != nrows or len(cols) != ncols:
            raise StructuralError("label list length differs from dimension")
        if len(set(rows)) != nrows or len(set(cols)) != ncols:
            raise StructuralError("row/column labels must be distinct")
        self.nrows = nrows
        self.ncols = ncols
        self.ones = oneset
        self.rows = rows
        self.cols = cols
        self._entry_order = entries
        self._arr = None

    # -- constructors ------------------------------------------------------------

    @classmethod
    def from_array(cls, a, rows=None, cols=None) -> "OrderedMatrix":
        a = np.asarray(a)
        if a.ndim != 2:
            raise StructuralError("expected a 2-d array")
        idx = np.argwhere(a != 0)
        return cls(a.shape[0], a.shape[1], (tuple(map(int, p)) for p in idx), rows, cols)

    @classmethod
    def from_perm(cls, perm: Sequence[int]) -> "OrderedMatrix":
        """Bijection matrix with a 1 at ``(i, perm[i])``."""
        n = len(perm)
        if sorted(perm) != list(range(n)):
            raise StructuralError("not a permutation")
        return cls(n, n, [(i, p) for i, p in enumerate(perm)])

    @classmethod
    def zeros(cls, r: int, c: int) -> "OrderedMatrix":
        return cls(r, c)

    @classmethod
    def identity(cls, n: int) -> "OrderedMatrix":
        return cls(n, n, [(i, i) for i in range(n)])

    @classmethod
    def reverse(cls, n: int) -> "OrderedMatrix":
        return cls(n, n, [(i, n - 1 - i) for i in range(n)])

    @classmethod
    def all_ones(cls, r: int, c: int) -> "OrderedMatrix":
        return cls(r, c, [(i, j) for i in range(r) for j in range(c)])

    # -- queries -----------------------------------------------------------------

    @property
    def shape(self) -> tuple:
        return (self.nrows, self.ncols)

    def array(self) -> np.ndarray:
        """Dense boolean copy (cached, read-only)."""
        if self._arr is None:
            a = np.zeros((self.nrows, self.ncols), dtype=bool)
            for i, j in self.ones:
                a[i, j] = True
            a.setflags(write=False)
            self._arr = a
        return self._arr

    def row_degrees(self) -> list:
        d = [0] * self.nrows
        for i, _ in self.ones:
            d[i] += 1
        return d

    def col_degrees(self) -> list:
        d = [0] * self.ncols
        for _, j in self.ones:
            d[j] += 1
        return d

    def max_degree(self) -> int:
        """Largest number of ones in a row or a column."""
        return max(self.row_degrees() + self.col_degrees(), default=0)

    def is_partial_bijection(self) -> bool:
        return max(self.max_degree(), 0) <= 1

    def is_bijection(self) -> bool:
        return (self.nrows == self.ncols and len(self.ones) == self.nrows
                and self.is_partial_bijection())

    def as_perm(self) -> list:
        """For a bijection matrix, the list ``f`` with ``M[i, f[i]] = 1``."""
        if not self.is_bijection():
            raise StructuralError("not a bijection matrix")
        f = [0] * self.nrows
        for i, j in self.ones:
            f[i] = j
        return f

    def transpose(self) -> "OrderedMatrix":
        return OrderedMatrix(self.ncols, self.nrows, [(j, i) for i, j in self.ones], self.cols, self.rows)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "OrderedMatrix":
        """Keep the given positions; relative order is that of the original matrix."""
        rows = sorted(set(rows))
        cols = sorted(set(cols))
        ri = {r: k for k, r in enumerate(rows)}
        ci = {c: k for k, c in enumerate(cols)}
        ones = [(ri[i], ci[j]) for i, j in self.ones if i in ri and j in ci]
        return OrderedMatrix(len(rows), len(cols), sorted(ones),
                             [self.rows[r] for r in rows], [self.cols[c] for c in cols])

    def __eq__(self, other):
        if not isinstance(other, OrderedMatrix):
            return NotImplemented
        return self.shape == other.shape and self.ones == other.ones

    def __hash__(self):
        return hash((self.shape, self.ones))

    def __repr__(self):
        return f"<OrderedMatrix {self.nrows}x{self.ncols} ones={len(self.ones)}>"

    def pretty(self) -> str:
        a = self.array()
        return "\n".join("".join("1" if x else "." for x in row) for row in a)


class Division:
    """Interval partitions of rows and columns given by cut positions.

    A cut ``p`` (``0 < p < size``) means a new interval starts at position ``p``.
    """

    __slots__ = ("nrows", "ncols", "row_cuts", "col_cuts")

    def __init__(self, nrows: int, ncols: int, row_cuts: Iterable[int] = (), col_cuts: Iterable[int] = ()):
        rc = tuple(int(p) for p in row_cuts)
        cc = tuple(int(p) for p in col_cuts)
        for name, cuts, size in (("row", rc, nrows), ("column", cc, ncols)):
            if any(b <= a for a, b in zip(cuts, cuts[1:])):
                raise StructuralError(f"{name} cuts not strictly increasing")
            if cuts and (cuts[0] <= 0 or cuts[-1] >= size):
                raise StructuralError(f"{name} cut out of range for size {size}")
        self.nrows = nrows
        self.ncols = ncols
        self.row_cuts = rc
        self.col_cuts = cc

    @classmethod
    def singletons(cls, nrows: int, ncols: int) -> "Division":
        return cls(nrows, ncols, range(1, nrows), range(1, ncols))

    @classmethod
    def trivial(cls, nrows: int, ncols: int) -> "Division":
        return cls(nrows, ncols)

    @property
    def shape(self) -> tuple:
        """Number of row parts and column parts (0 for an empty axis)."""
        return (len(self.row_cuts) + 1 if self.nrows else 0,
                len(self.col_cuts) + 1 if self.ncols else 0)

    def row_part(self, i: int) -> int:
        return bisect_right(self.row_cuts, i)

    def col_part(self, j: int) -> int:
        return bisect_right(self.col_cuts, j)

    def row_intervals(self) -> list:
        b = (0,) + self.row_cuts + (self.nrows,)
        return [(b[k], b[k + 1]) for k in range(len(b) - 1)] if self.nrows else []

    def col_intervals(self) -> list:
        b = (0,) + self.col_cuts + (self.ncols,)
        return [(b[k], b[k + 1]) for k in range(len(b) - 1)] if self.ncols else []

    def __eq__(self, other):
        return isinstance(other, Division) and (self.nrows, self.ncols, self.row_cuts, self.col_cuts) == (
            other.nrows, other.ncols, other.row_cuts, other.col_cuts)

    def __hash__(self):
        return hash((self.nrows, self.ncols, self.row_cuts, self.col_cuts))

    def __repr__(self):
        return f"Division({self.nrows}, {self.ncols}, rows={list(self.row_cuts)}, cols={list(self.col_cuts)})"


def quotient_matrix(M: OrderedMatrix, D: Division) -> OrderedMatrix:
    """Matrix over the parts of ``D``: a 1 wherever the zone holds a 1 of ``M``."""
    if (D.nrows, D.ncols) != M.shape:
        raise StructuralError(f"division is for {D.nrows}x{D.ncols}, matrix is {M.nrows}x{M.ncols}")
    r, c = D.shape
    ones = {(D.row_part(i), D.col_part(j)) for i, j in M.ones}
    return OrderedMatrix(r, c, sorted(ones))


def superpose(Ms: Sequence[OrderedMatrix]) -> OrderedMatrix:
    """Entrywise maximum of matrices sharing one shape."""
    if not Ms:
        raise StructuralError("superpose needs at least one matrix")
    shape = Ms[0].shape
    ones = set()
    for M in Ms:
        if M.shape != shape:
            raise StructuralError(f"shape mismatch {M.shape} vs {shape}")
        ones |= M.ones
    return OrderedMatrix(shape[0], shape[1], sorted(ones), Ms[0].rows, Ms[0].cols)


def substitute(Mf: OrderedMatrix, blocks: Mapping) -> OrderedMatrix:
    """Replace each 1 at ``(a, f(a))`` of a bijection matrix by ``blocks[(a, f(a))]``.

    Row group ``a`` gets the height of its block and column group ``f(a)`` its
    width; groups are laid out in the order of ``Mf``.
    """
    if not Mf.is_bijection():
        raise StructuralError("substitution needs a bijection matrix")
    f = Mf.as_perm()
    n = Mf.nrows
    for a in range(n):
        if (a, f[a]) not in blocks:
            raise StructuralError(f"missing block for position ({a}, {f[a]})")
    height = [blocks[(a, f[a])].nrows for a in range(n)]
    width = [0] * n
    for a in range(n):
        width[f[a]] = blocks[(a, f[a])].ncols
    roff = np.concatenate([[0], np.cumsum(height)]).astype(int)
    coff = np.concatenate([[0], np.cumsum(width)]).astype(int)
    ones = []
    for a in range(n):
        B = blocks[(a, f[a])]
        for i, j in B.ones:
            ones.append((int(roff[a]) + i, int(coff[f[a]]) + j))
    return OrderedMatrix(int(roff[-1]), int(coff[-1]), sorted(ones))


def tensor(M: OrderedMatrix, N: OrderedMatrix) -> OrderedMatrix:
    """Lexicographic product: each 1 of ``M`` becomes a copy of ``N``, zeros become zero blocks."""
    r, c = N.shape
    ones = sorted((i * r + k, j * c + l) for i, j in M.ones for k, l in N.ones)
    return OrderedMatrix(M.nrows * r, M.ncols * c, ones)


def compose(Msigma: OrderedMatrix, Mtau: OrderedMatrix) -> OrderedMatrix:
    """Matrix of ``tau o sigma`` (boolean product), rows of ``Msigma`` by columns of ``Mtau``."""
    if Msigma.ncols != Mtau.nrows or Msigma.cols != Mtau.rows:
        raise StructuralError("column index list of the first matrix must equal the row list of the second")
    by_row: dict = {}
    for y, z in Mtau.ones:
        by_row.setdefault(y, []).append(z)
    ones = {(x, z) for x, y in Msigma.ones for z in by_row.get(y, ())}
    return OrderedMatrix(Msigma.nrows, Mtau.ncols, sorted(ones), Msigma.rows, Mtau.cols)


def inverse(M: OrderedMatrix) -> OrderedMatrix:
    """Matrix of the inverse map of a (partial) bijection, i.e. the transpose."""
    return M.transpose()


def adjacency_matrix(G, order: Optional[Sequence[int]] = None) -> OrderedMatrix:
    """``A_<(G)``: rows and columns are vertices listed in ``order`` (or ``G.order``)."""
    if order is None:
        order = G.order if G.order is not None else range(G.n)
    order = list(order)
    pos = {v: i for i, v in enumerate(order)}
    if len(pos) != G.n or set(pos) != set(range(G.n)):
        raise StructuralError("order is not a permutation of the vertices")
    ones = set()
    for u, v in G.edge_set:
        ones.add((pos[u], pos[v]))
        ones.add((pos[v], pos[u]))
    return OrderedMatrix(G.n, G.n, sorted(ones), order, order)


# -- text format ---------------------------------------------------------------


def write_matrix(M: OrderedMatrix) -> str:
    entries = M._entry_order if len(M._entry_order) == len(M.ones) else sorted(M.ones)
    lines = [f"{M.nrows} {M.ncols}"] + [f"{i} {j}" for i, j in entries]
    return "\n".join(lines) + "\n"


def read_matrix(text: str) -> OrderedMatrix:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise StructuralError("empty matrix file")
    try:
        r, c = (int(t) for t in lines[0].split())
        ones = [tuple(int(t) for t in ln.split()) for ln in lines[1:]]
    except ValueError as exc:
        raise StructuralError("malformed matrix file") from exc
    if any(len(p) != 2 for p in ones):
        raise StructuralError("each entry line needs two integers")
    return OrderedMatrix(r, c, ones)
