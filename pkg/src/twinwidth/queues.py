"""Queue layouts of ordered graphs and increasing decompositions of 0-1 matrices."""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import permutations
from typing import Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import LayoutViolation, RefusalError, StructuralError
from .graph_core import OrderedGraph
from .matrix_core import OrderedMatrix


def _norm(e) -> tuple:
    u, v = e
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class QueueLayout:
    """A vertex order (``order[i]`` is the i-th vertex) and a partition of the edges."""

    order: tuple
    classes: tuple
    strict: bool = False

    @property
    def t(self) -> int:
        return len(self.classes)

    def to_json(self) -> str:
        return json.dumps({"order": list(self.order), "strict": self.strict,
                           "classes": [[list(e) for e in c] for c in self.classes]}) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "QueueLayout":
        d = json.loads(text)
        return cls(tuple(d["order"]), tuple(tuple(_norm(e) for e in c) for c in d["classes"]), bool(d["strict"]))


def nested(e, f, pos) -> bool:
    """Whether one edge strictly encloses the other under the positions ``pos``."""
    a, b = sorted((pos[e[0]], pos[e[1]]))
    c, d = sorted((pos[f[0]], pos[f[1]]))
    return (a < c and d < b) or (c < a and b < d)


def _positions(n: int, order: Sequence[int]) -> list:
    pos = [0] * n
    for i, v in enumerate(order):
        pos[v] = i
    return pos


def find_violation(G: OrderedGraph, L: QueueLayout) -> Optional[tuple]:
    """First offending pair ``(kind, e, f, queue)`` or None; checks coverage too."""
    if sorted(L.order) != list(range(G.n)):
        raise StructuralError("layout order is not a permutation of the vertices")
    want = sorted(_norm(e) for e in G.edges)
    have = sorted(_norm(e) for c in L.classes for e in c)
    if want != have:
        missing = sorted(set(want) - set(have))
        extra = [e for e in set(have) if have.count(e) > want.count(e)]
        raise StructuralError(f"layout does not partition the edges: missing {missing}, extra {sorted(extra)}")
    pos = _positions(G.n, L.order)
    for q, cls in enumerate(L.classes):
        cls = [_norm(e) for e in cls]
        for i, e in enumerate(cls):
            for f in cls[i + 1:]:
                if nested(e, f, pos):
                    return ("nested", e, f, q)
                if L.strict and set(e) & set(f):
                    return ("shared endpoint", e, f, q)
    return None


def verify_layout(G: OrderedGraph, L: QueueLayout) -> int:
    """Number of queues; raises LayoutViolation on the first bad pair."""
    bad = find_violation(G, L)
    if bad is not None:
        kind, e, f, q = bad
        raise LayoutViolation(f"{kind} edges {e} and {f} in queue {q}", kind, e, f, q)
    return L.t


# -- fixed order -----------------------------------------------------------------


def qn_fixed_order(G: OrderedGraph, order: Sequence[int]) -> tuple:
    """Minimum queues for a fixed order: each edge goes to 1 + the depth of the
    deepest chain of edges nested inside it, so the count is the largest rainbow."""
    pos = _positions(G.n, order)
    edges = sorted({_norm(e) for e in G.edges}, key=lambda e: (abs(pos[e[0]] - pos[e[1]]), e))
    depth = {}
    for e in edges:
        depth[e] = 1 + max((depth[f] for f in depth if nested(e, f, pos)), default=0)
    t = max(depth.values(), default=0)
    classes = tuple(tuple(sorted(e for e in edges if depth[e] == i + 1)) for i in range(t))
    return t, QueueLayout(tuple(order), classes, False)


def _conflicts(edges: list, pos: list) -> list:
    m = len(edges)
    adj = [0] * m
    for i in range(m):
        for j in range(i + 1, m):
            e, f = edges[i], edges[j]
            if set(e) & set(f) or nested(e, f, pos):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return adj


def _color_dsatur(adj: list, k: int, budget: Optional[list] = None) -> Optional[list]:
    """Proper coloring with at most k colors by DSATUR backtracking, or None."""
    m = len(adj)
    color = [-1] * m

    def pick():
        best, key = -1, None
        for v in range(m):
            if color[v] < 0:
                used = {color[w] for w in range(m) if adj[v] >> w & 1 and color[w] >= 0}
                kk = (len(used), bin(adj[v]).count("1"), -v)
                if key is None or kk > key:
                    best, key = v, kk
        return best

    def rec(done, ncol):
        if done == m:
            return True
        if budget is not None:
            budget[0] -= 1
            if budget[0] < 0:
                raise TimeoutError
        v = pick()
        used = {color[w] for w in range(m) if adj[v] >> w & 1 and color[w] >= 0}
        for c in range(min(k, ncol + 1)):
            if c in used:
                continue
            color[v] = c
            if rec(done + 1, max(ncol, c + 1)):
                return True
            color[v] = -1
        return False

    return color if rec(0, 0) else None


def _greedy_colors(adj: list) -> list:
    m = len(adj)
    color = [-1] * m
    for v in sorted(range(m), key=lambda v: -bin(adj[v]).count("1")):
        used = {color[w] for w in range(m) if adj[v] >> w & 1}
        c = 0
        while c in used:
            c += 1
        color[v] = c
    return color


def _strict_for_order(G: OrderedGraph, order, below: Optional[int] = None):
    """Exact min strict queues for one order; with ``below`` only report values < below."""
    pos = _positions(G.n, order)
    edges = sorted({_norm(e) for e in G.edges})
    if not edges:
        return 0, []
    adj = _conflicts(edges, pos)
    lb = G.max_degree()
    best = _greedy_colors(adj)
    ub = max(best) + 1
    top = ub if below is None else min(ub, below)
    for k in range(lb, top):
        col = _color_dsatur(adj, k)
        if col is not None:
            best, ub = col, k
            break
    if below is not None and ub >= below:
        return None, None
    classes = [[] for _ in range(max(best) + 1)]
    for e, c in zip(edges, best):
        classes[c].append(e)
    return ub, [tuple(c) for c in classes]


def sqn_fixed_order(G: OrderedGraph, order: Sequence[int]) -> tuple:
    """Minimum strict queues for a fixed order (exact coloring of the conflict graph)."""
    t, classes = _strict_for_order(G, order)
    return t, QueueLayout(tuple(order), tuple(classes), True)


# -- optimal orders --------------------------------------------------------------


def _orders(n: int, first: int):
    rest = [v for v in range(n) if v != first]
    for tail in permutations(rest):
        # reversing an order changes neither nesting nor shared endpoints
        if n >= 2 and first > tail[-1]:
            continue
        yield (first,) + tail


def _chunk(args):
    kind, n, edges, first, lower = args
    G = OrderedGraph(n, edges)
    best, best_order, best_classes = None, None, None
    for order in _orders(n, first):
        if kind == "qn":
            t, L = qn_fixed_order(G, order)
            if best is None or t < best:
                best, best_order, best_classes = t, order, L.classes
        else:
            t, classes = _strict_for_order(G, order, best)
            if t is not None:
                best, best_order, best_classes = t, order, tuple(classes)
        if best is not None and best <= lower:
            break
    return best, best_order, best_classes


def _exact(kind: str, G: OrderedGraph, workers: int, max_exact: int):
    n = G.n
    if n > max_exact:
        raise RefusalError(f"exact {kind} enumerates all orders; n={n} exceeds {max_exact}")
    if n == 0 or G.m == 0:
        return 0, QueueLayout(tuple(range(n)), (), kind == "sqn")
    edges = sorted({_norm(e) for e in G.edges})
    lower = 1 if kind == "qn" else G.max_degree()
    tasks = [(kind, n, edges, f, lower) for f in range(n)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_chunk, tasks))
    else:
        results = []
        for t in tasks:
            r = _chunk(t)
            results.append(r)
            if r[0] is not None and r[0] <= lower:
                break
    best = min((r for r in results if r[0] is not None), key=lambda r: (r[0], r[1]))
    L = QueueLayout(tuple(best[1]), tuple(best[2]), kind == "sqn")
    assert verify_layout(G, L) == best[0]
    return best[0], L


def qn_exact(G: OrderedGraph, workers: int = 1, max_exact: int = 8):
    """Queue number over all orders; returns the lexicographically least optimal order."""
    return _exact("qn", G, workers, max_exact)


def sqn_exact(G: OrderedGraph, workers: int = 1, max_exact: int = 8):
    """Strict queue number over all orders, with a verified layout."""
    return _exact("sqn", G, workers, max_exact)


# -- strict refinement -----------------------------------------------------------


def misra_gries(n: int, edges: Sequence[tuple], colors: int) -> dict:
    """Proper edge coloring of a simple graph with ``colors`` >= max degree + 1 colors."""
    adj = [dict() for _ in range(n)]  # adj[u][w] = color or None
    for u, v in edges:
        adj[u][v] = None
        adj[v][u] = None

    def free(x):
        used = {c for c in adj[x].values() if c is not None}
        return [c for c in range(colors) if c not in used]

    def is_free(c, x):
        return all(col != c for col in adj[x].values())

    def set_color(a, b, c):
        adj[a][b] = c
        adj[b][a] = c

    for u, v in edges:
        fan = [v]
        while True:
            last = fan[-1]
            nxt = None
            for w in sorted(adj[u]):
                c = adj[u][w]
                if w not in fan and c is not None and is_free(c, last):
                    nxt = w
                    break
            if nxt is None:
                break
            fan.append(nxt)
        c = free(u)[0]
        d = free(fan[-1])[0]
        if c != d:
            # invert the path from u alternating colors d, c, d, ...
            path = [u]
            want = d
            x = u
            while True:
                y = next((w for w, col in adj[x].items() if col == want and (len(path) < 2 or w != path[-2])), None)
                if y is None:
                    break
                path.append(y)
                x = y
                want = c if want == d else d
            for a, b in zip(path, path[1:]):
                set_color(a, b, c if adj[a][b] == d else d)
        w_idx = None
        for j, w in enumerate(fan):
            ok_prefix = all(adj[u][fan[i + 1]] is not None and is_free(adj[u][fan[i + 1]], fan[i]) for i in range(j))
            if ok_prefix and is_free(d, w):
                w_idx = j
                break
        assert w_idx is not None, "Misra-Gries invariant broken"
        for i in range(w_idx):
            set_color(u, fan[i], adj[u][fan[i + 1]])
        set_color(u, fan[w_idx], d)
    return {(min(a, b), max(a, b)): adj[a][b] for a in range(n) for b in adj[a] if a < b}


def refine_to_strict(G: OrderedGraph, L: QueueLayout) -> QueueLayout:
    """Split every queue by a (max degree + 1)-edge-coloring into strict queues."""
    verify_layout(G, L)
    D = G.max_degree()
    classes = []
    for cls in L.classes:
        col = misra_gries(G.n, [_norm(e) for e in cls], D + 1)
        for c in range(D + 1):
            part = tuple(sorted(e for e, k in col.items() if k == c))
            if part:
                classes.append(part)
    out = QueueLayout(L.order, tuple(classes), True)
    verify_layout(G, out)
    return out


# -- matrices --------------------------------------------------------------------


def is_increasing(M: OrderedMatrix) -> bool:
    pts = sorted(M.ones)
    return all(a[0] < b[0] and a[1] < b[1] for a, b in zip(pts, pts[1:]))


def increasing_decomposition(M: OrderedMatrix) -> tuple:
    """Fewest increasing matrices whose superposition is M.

    The ones ordered by strict dominance form a poset whose chains are exactly
    the increasing matrices; a minimum chain cover comes from a maximum
    matching between "predecessor" and "successor" copies of the ones.
    """
    pts = sorted(M.ones)
    k = len(pts)
    if k == 0:
        return 0, []
    rows, cols = [], []
    for i, (x1, y1) in enumerate(pts):
        for j in range(i + 1, k):
            x2, y2 = pts[j]
            if x1 < x2 and y1 < y2:
                rows.append(i)
                cols.append(j)
    A = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(k, k))
    match = maximum_bipartite_matching(A, perm_type="column")
    succ = {i: int(j) for i, j in enumerate(match) if j >= 0}
    has_pred = set(succ.values())
    parts = []
    for i in range(k):
        if i in has_pred:
            continue
        chain = [pts[i]]
        while i in succ:
            i = succ[i]
            chain.append(pts[i])
        parts.append(OrderedMatrix(M.nrows, M.ncols, chain, M.rows, M.cols))
    return len(parts), parts
