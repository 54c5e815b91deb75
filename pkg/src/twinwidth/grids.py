"""k-grids in ordered 0-1 matrices, grid numbers, and monochromatic subgrids."""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations, permutations
from math import comb
from typing import Optional

import numpy as np

from .errors import RefusalError, StructuralError
from .graph_core import OrderedGraph
from .matrix_core import Division, OrderedMatrix, adjacency_matrix, quotient_matrix


@dataclass(frozen=True)
class GridWitness:
    """A k x k division with one chosen 1 inside each zone.

    ``points[i][j] = (x, y)`` is the witnessing 1 of zone ``(i, j)``.
    """

    k: int
    row_cuts: tuple
    col_cuts: tuple
    points: tuple

    def to_json(self) -> str:
        return json.dumps({"k": self.k, "row_cuts": list(self.row_cuts), "col_cuts": list(self.col_cuts),
                           "points": [[list(p) for p in row] for row in self.points]}) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "GridWitness":
        d = json.loads(text)
        return cls(int(d["k"]), tuple(d["row_cuts"]), tuple(d["col_cuts"]),
                   tuple(tuple(tuple(p) for p in row) for row in d["points"]))


def points_form_grid(M: OrderedMatrix, points) -> bool:
    """Point test: every ``points[i][j]`` is a 1, rows strictly increase with ``i``
    across all ``j``, columns strictly increase with ``j`` across all ``i``."""
    k = len(points)
    if any(len(row) != k for row in points):
        return False
    for row in points:
        for x, y in row:
            if (x, y) not in M.ones:
                return False
    for i in range(k - 1):
        if max(p[0] for p in points[i]) >= min(p[0] for p in points[i + 1]):
            return False
    for j in range(k - 1):
        if max(points[i][j][1] for i in range(k)) >= min(points[i][j + 1][1] for i in range(k)):
            return False
    return True


def check_witness(M: OrderedMatrix, w: GridWitness) -> bool:
    """Re-check a witness both as a division with all zones non-zero and in point form."""
    try:
        D = Division(M.nrows, M.ncols, w.row_cuts, w.col_cuts)
    except StructuralError:
        return False
    if D.shape != (w.k, w.k):
        return False
    Q = quotient_matrix(M, D)
    if len(Q.ones) != w.k * w.k:
        return False
    for i, row in enumerate(w.points):
        for j, (x, y) in enumerate(row):
            if D.row_part(x) != i or D.col_part(y) != j:
                return False
    return points_form_grid(M, w.points)


def _bands_greedy(colsets: list, col_part_of: list, k: int) -> Optional[list]:
    """Earliest row cuts so each of k bands meets all k column intervals.

    Taking each band as short as possible never hurts later bands, so this
    succeeds iff some row division works with the given column intervals.
    """
    full = (1 << k) - 1
    cuts = []
    seen = 0
    for i, cols in enumerate(colsets):
        for y in cols:
            seen |= 1 << col_part_of[y]
        if seen == full:
            if len(cuts) == k - 1:
                return cuts
            cuts.append(i + 1)
            seen = 0
    return None


def contains_k_grid(M: OrderedMatrix, k: int) -> Optional[GridWitness]:
    """Return a k-grid witness or None.

    Column interval choices are enumerated (on the shorter axis); rows are then
    banded greedily. The witness is returned in point form and re-checked.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if M.nrows < k or M.ncols < k or len(M.ones) < k * k:
        return None
    if M.ncols > M.nrows:
        w = contains_k_grid(M.transpose(), k)
        if w is None:
            return None
        pts = tuple(tuple((w.points[j][i][1], w.points[j][i][0]) for j in range(k)) for i in range(k))
        out = GridWitness(k, w.col_cuts, w.row_cuts, pts)
        assert check_witness(M, out)
        return out
    rowsets = [[] for _ in range(M.nrows)]
    for x, y in M.ones:
        rowsets[x].append(y)
    nonempty_cols = sorted({y for _, y in M.ones})
    # cuts only need to sit just after non-empty columns
    cand = sorted({y + 1 for y in nonempty_cols if y + 1 < M.ncols})
    for cc in combinations(cand, k - 1):
        col_part_of = [0] * M.ncols
        part = 0
        for y in range(M.ncols):
            while part < k - 1 and y >= cc[part]:
                part += 1
            col_part_of[y] = part
        rc = _bands_greedy(rowsets, col_part_of, k)
        if rc is None:
            continue
        D = Division(M.nrows, M.ncols, rc, cc)
        pts = [[None] * k for _ in range(k)]
        for x, y in sorted(M.ones):
            i, j = D.row_part(x), D.col_part(y)
            if pts[i][j] is None:
                pts[i][j] = (x, y)
        w = GridWitness(k, tuple(rc), tuple(cc), tuple(tuple(r) for r in pts))
        assert check_witness(M, w)
        return w
    return None


def contains_k_grid_bruteforce(M: OrderedMatrix, k: int) -> bool:
    """Oracle: try every k x k division."""
    if M.nrows < k or M.ncols < k:
        return False
    for rc in combinations(range(1, M.nrows), k - 1):
        for cc in combinations(range(1, M.ncols), k - 1):
            if len(quotient_matrix(M, Division(M.nrows, M.ncols, rc, cc)).ones) == k * k:
                return True
    return False


def grid_number_matrix(M: OrderedMatrix) -> int:
    """Largest k such that M has a k-grid (0 for the zero matrix)."""
    k = 0
    while contains_k_grid(M, k + 1) is not None:
        k += 1
    return k


def _gn_below(M: OrderedMatrix, bound: Optional[int]) -> Optional[int]:
    """gn(M) if it is below ``bound`` (or bound is None), else None."""
    if bound is not None and bound <= 0:
        return None
    if bound is not None and contains_k_grid(M, bound) is not None:
        return None
    return grid_number_matrix(M)


def _orders_with_first(n: int, first: int):
    rest = [v for v in range(n) if v != first]
    for tail in permutations(rest):
        # an order and its reverse give the same grid number; keep first < last
        if n >= 2 and first > tail[-1]:
            continue
        yield (first,) + tail


def _gn_chunk(args):
    n, edges, first, lower = args
    G = OrderedGraph(n, edges)
    best, best_order = None, None
    for order in _orders_with_first(n, first):
        g = _gn_below(adjacency_matrix(G, order), best)
        if g is not None:
            best, best_order = g, order
            if best <= lower:
                break
    return best, best_order


def grid_number_graph(G: OrderedGraph, mode: str = "exact", workers: int = 1, max_exact: int = 8):
    """``(gn, order)``: exact minimum over vertex orders, or a heuristic upper bound.

    Exact mode scans orders lexicographically (an order and its reverse are
    equivalent) and returns the lexicographically least optimal order.
    """
    n = G.n
    if n == 0:
        return 0, ()
    lower = 1 if G.m else 0
    if mode == "heuristic":
        return _gn_heuristic(G)
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    if n > max_exact:
        raise RefusalError(f"exact grid number enumerates all orders; n={n} exceeds {max_exact}")
    edges = sorted(G.edge_set)
    firsts = list(range(n)) if n >= 2 else [0]
    tasks = [(n, edges, f, lower) for f in firsts]
    results = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_gn_chunk, tasks))
    else:
        for t in tasks:
            res = _gn_chunk(t)
            results.append(res)
            if res[0] is not None and res[0] <= lower:
                break
    best = min((r for r in results if r[0] is not None), key=lambda r: (r[0], r[1]))
    return best[0], tuple(best[1])


def bfs_order(G: OrderedGraph, root: Optional[int] = None) -> list:
    """Breadth-first order from a maximum-degree root, restarting on each component."""
    adj = G.adjacency()
    seen = [False] * G.n
    order = []
    roots = sorted(range(G.n), key=lambda v: (-len(adj[v]), v))
    if root is not None:
        roots = [root] + [r for r in roots if r != root]
    for r in roots:
        if seen[r]:
            continue
        seen[r] = True
        queue = [r]
        while queue:
            nxt = []
            for u in queue:
                order.append(u)
                for w in sorted(adj[u]):
                    if not seen[w]:
                        seen[w] = True
                        nxt.append(w)
            queue = nxt
    return order


def _gn_heuristic(G: OrderedGraph, passes: int = 3):
    order = bfs_order(G)
    best = grid_number_matrix(adjacency_matrix(G, order))
    for _ in range(passes):
        improved = False
        for i in range(G.n - 1):
            cand = order[:i] + [order[i + 1], order[i]] + order[i + 2:]
            g = _gn_below(adjacency_matrix(G, cand), best)
            if g is not None:
                order, best, improved = cand, g, True
        if not improved:
            break
    return best, tuple(order)


# -- monochromatic subgrids ------------------------------------------------------


def ramsey_threshold(r: int, k: int) -> int:
    return r ** (r * k)


def monochromatic_grid(C, r: int, k: int):
    """Find ``(color, rows, cols)`` with a k x k single-colored submatrix.

    ``C`` is an l x l array of colors in 1..r with l >= r**(r*k). Among the first
    r(k-1)+1 rows every column repeats some color k times; columns sharing the
    same (color, first k such rows) pattern k times give the submatrix.
    """
    C = np.asarray(C)
    if r < 2:
        raise ValueError("need r >= 2 colors")
    l = C.shape[0]
    if C.shape != (l, l):
        raise StructuralError("colored matrix must be square")
    if l < ramsey_threshold(r, k):
        raise RefusalError(f"size {l} is below r^(rk) = {ramsey_threshold(r, k)}")
    if C.size and (C.min() < 1 or C.max() > r):
        raise StructuralError("colors must lie in 1..r")
    m = min(l, r * (k - 1) + 1)
    buckets: dict = {}
    for y in range(l):
        col = C[:m, y]
        for color in range(1, r + 1):
            rows = np.flatnonzero(col == color)
            if len(rows) >= k:
                key = (color, tuple(int(x) for x in rows[:k]))
                buckets.setdefault(key, []).append(y)
                if len(buckets[key]) == k:
                    color, rows_k = key
                    return color, list(rows_k), buckets[key]
    return _monochromatic_exhaustive(C, r, k)


def _monochromatic_exhaustive(C, r: int, k: int):
    """Fallback: for each color and k-set of rows, look for k agreeing columns."""
    l = C.shape[0]
    for color in range(1, r + 1):
        mask = C == color
        for rows in combinations(range(l), k):
            cols = np.flatnonzero(mask[list(rows)].all(axis=0))
            if len(cols) >= k:
                return color, list(rows), [int(c) for c in cols[:k]]
    return None


def pattern_bound_guaranteed(r: int, k: int) -> bool:
    """Whether the pattern-counting argument alone covers l = r^(rk)."""
    m = r * (k - 1) + 1
    return ramsey_threshold(r, k) >= max(m, (k - 1) * r * comb(m, k) + 1)
