"""Finite graphs with optional vertex order and edge labels, plus quotients and powers."""
from __future__ import annotations

import math
from collections import deque
from typing import Iterable, Optional, Sequence


from .errors import StructuralError

INF = math.inf

Label = tuple  # (symbol: str, exponent: +1 | -1)


class OrderedGraph:
    """Immutable graph on vertices ``0..n-1``.

    ``edges`` keeps input order and orientation; ``labels[i]`` (if given) is the
    letter read when traversing ``edges[i]`` from its first to its second endpoint.
    Duplicate edges are only accepted through :meth:`multigraph`.
    """

    __slots__ = ("n", "edges", "order", "labels", "alphabet", "is_multigraph", "_adj", "_edge_set")

    def __init__(
        self,
        n: int,
        edges: Iterable[Sequence[int]] = (),
        order: Optional[Sequence[int]] = None,
        labels: Optional[Sequence[Label]] = None,
        alphabet: Optional[Sequence[str]] = None,
        *,
        _multi: bool = False,
    ):
        if n < 0:
            raise StructuralError("negative vertex count")
        edge_list = tuple((int(u), int(v)) for u, v in edges)
        seen = set()
        for u, v in edge_list:
            if u == v:
                raise StructuralError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise StructuralError(f"edge ({u}, {v}) out of range for n={n}")
            key = (u, v) if u < v else (v, u)
            if key in seen and not _multi:
                raise StructuralError(f"duplicate edge {key} in a simple graph")
            seen.add(key)
        if order is not None:
            order = tuple(int(x) for x in order)
            if sorted(order) != list(range(n)):
                raise StructuralError("order is not a permutation of the vertices")
        if labels is not None:
            labels = tuple((str(s), int(e)) for s, e in labels)
            if len(labels) != len(edge_list):
                raise StructuralError("one label per edge required")
            if any(e not in (1, -1) for _, e in labels):
                raise StructuralError("label exponent must be +1 or -1")
        if alphabet is not None:
            alphabet = tuple(alphabet)
            if labels is not None:
                missing = {s for s, _ in labels} - set(alphabet)
                if missing:
                    raise StructuralError(f"labels outside alphabet: {sorted(missing)}")
        self.n = n
        self.edges = edge_list
        self.order = order
        self.labels = labels
        self.alphabet = alphabet
        self.is_multigraph = _multi
        self._adj = None
        self._edge_set = frozenset(seen)

    @classmethod
    def multigraph(cls, n: int, edges, labels=None, alphabet=None) -> "OrderedGraph":
        """Graph allowing parallel edges (used for unions of perfect matchings)."""
        return cls(n, edges, labels=labels, alphabet=alphabet, _multi=True)

    # -- basic queries -------------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def edge_set(self) -> frozenset:
        """Unordered edges as sorted pairs (parallel edges collapse)."""
        return self._edge_set

    def adjacency(self) -> tuple:
        """Neighbour tuples per vertex, with multiplicity for multigraphs."""
        if self._adj is None:
            adj = [[] for _ in range(self.n)]
            for u, v in self.edges:
                adj[u].append(v)
                adj[v].append(u)
            self._adj = tuple(tuple(a) for a in adj)
        return self._adj

    def neighbors(self, v: int) -> tuple:
        return self.adjacency()[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency()[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency()), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._edge_set

    def with_order(self, order: Sequence[int]) -> "OrderedGraph":
        return OrderedGraph(self.n, self.edges, order, self.labels, self.alphabet, _multi=self.is_multigraph)

    def rank(self) -> list:
        """Position of each vertex in the order (identity when no order is set)."""
        if self.order is None:
            return list(range(self.n))
        pos = [0] * self.n
        for i, v in enumerate(self.order):
            pos[v] = i
        return pos

    def induced(self, vertices: Sequence[int]) -> "OrderedGraph":
        """Subgraph induced on ``vertices``, relabelled by position in the list."""
        idx = {v: i for i, v in enumerate(vertices)}
        edges, labels = [], []
        for e, (u, v) in enumerate(self.edges):
            if u in idx and v in idx:
                edges.append((idx[u], idx[v]))
                if self.labels is not None:
                    labels.append(self.labels[e])
        return OrderedGraph(len(vertices), edges, labels=labels if self.labels is not None else None,
                            alphabet=self.alphabet, _multi=self.is_multigraph)

    def __eq__(self, other):
        if not isinstance(other, OrderedGraph):
            return NotImplemented
        return (self.n, self.edges, self.order, self.labels, self.alphabet, self.is_multigraph) == (
            other.n, other.edges, other.order, other.labels, other.alphabet, other.is_multigraph)

    def __hash__(self):
        return hash((self.n, self.edges, self.order, self.labels))

    def __repr__(self):
        kind = "multigraph" if self.is_multigraph else "graph"
        return f"<OrderedGraph {kind} n={self.n} m={self.m}>"


class VertexPartition:
    """Partition of ``0..n-1`` into non-empty disjoint parts (kept in given order)."""

    __slots__ = ("n", "parts", "part_of")

    def __init__(self, n: int, parts: Iterable[Iterable[int]]):
        parts = tuple(tuple(sorted(int(v) for v in p)) for p in parts)
        part_of = [-1] * n
        for i, p in enumerate(parts):
            if not p:
                raise StructuralError(f"part {i} is empty")
            for v in p:
                if not 0 <= v < n:
                    raise StructuralError(f"vertex {v} out of range")
                if part_of[v] != -1:
                    raise StructuralError(f"vertex {v} appears in two parts")
                part_of[v] = i
        missing = [v for v in range(n) if part_of[v] == -1]
        if missing:
            raise StructuralError(f"vertices not covered: {missing[:10]}")
        self.n = n
        self.parts = parts
        self.part_of = tuple(part_of)

    @classmethod
    def singletons(cls, n: int) -> "VertexPartition":
        return cls(n, [[v] for v in range(n)])

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "VertexPartition":
        """Parts = classes of equal label, ordered by their smallest vertex."""
        groups: dict = {}
        for v, lab in enumerate(labels):
            groups.setdefault(lab, []).append(v)
        return cls(len(labels), sorted(groups.values()))

    def max_part_size(self) -> int:
        return max((len(p) for p in self.parts), default=0)

    def __len__(self):
        return len(self.parts)

    def __repr__(self):
        return f"VertexPartition({self.n}, {list(map(list, self.parts))})"


# -- metrics ---------------------------------------------------------------------


def _bfs_dist(adj, src: int, limit: Optional[int] = None) -> dict:
    dist = {src: 0}
    dq = deque([src])
    while dq:
        u = dq.popleft()
        d = dist[u]
        if limit is not None and d >= limit:
            continue
        for w in adj[u]:
            if w not in dist:
                dist[w] = d + 1
                dq.append(w)
    return dist


def girth(G: OrderedGraph) -> float:
    """Length of a shortest cycle; parallel edges give 2, forests give ``inf``."""
    n = G.n
    if n == 0:
        return INF
    if G.is_multigraph and len(G.edge_set) < G.m:
        return 2
    # incidence lists with edge ids so the tree edge is skipped, not the neighbour
    inc = [[] for _ in range(n)]
    for eid, (u, v) in enumerate(G.edges):
        inc[u].append((v, eid))
        inc[v].append((u, eid))
    best = INF
    dist = [-1] * n
    via = [-1] * n
    for root in range(n):
        touched = [root]
        dist[root] = 0
        dq = deque([root])
        while dq:
            u = dq.popleft()
            du = dist[u]
            # any cycle closed from this depth has length >= 2*du
            if 2 * du >= best:
                break
            for w, eid in inc[u]:
                if eid == via[u]:
                    continue
                if dist[w] == -1:
                    dist[w] = du + 1
                    via[w] = eid
                    touched.append(w)
                    dq.append(w)
                else:
                    best = min(best, du + dist[w] + 1)
        for t in touched:
            dist[t] = -1
            via[t] = -1
    return best


def diameter(G: OrderedGraph) -> float:
    """Largest distance between two vertices; ``inf`` if disconnected, 0 if n <= 1."""
    n = G.n
    if n <= 1:
        return 0
    if n <= 64:
        adj = G.adjacency()
        best = 0
        for s in range(n):
            d = _bfs_dist(adj, s)
            if len(d) < n:
                return INF
            best = max(best, max(d.values()))
        return best
    # all-pairs BFS at once: reach[v] is the bitset of vertices within the current radius
    adj = G.adjacency()
    full = (1 << n) - 1
    reach = [1 << v for v in range(n)]
    radius = 0
    while True:
        if all(r == full for r in reach):
            return radius
        nxt = []
        for v in range(n):
            r = reach[v]
            for w in adj[v]:
                r |= reach[w]
            nxt.append(r)
        if nxt == reach:
            return INF
        reach = nxt
        radius += 1


def is_connected(G: OrderedGraph) -> bool:
    if G.n <= 1:
        return True
    return len(_bfs_dist(G.adjacency(), 0)) == G.n


def graph_stats(G: OrderedGraph) -> tuple:
    """Return ``(max_degree, diameter, girth)`` with ``inf`` where undefined."""
    return G.max_degree(), diameter(G), girth(G)


# -- constructions -------------------------------------------------------------


def quotient_graph(G: OrderedGraph, P: VertexPartition) -> OrderedGraph:
    """Graph on the parts of ``P``; distinct parts adjacent iff some edge joins them."""
    if P.n != G.n:
        raise StructuralError(f"partition is over {P.n} vertices, graph has {G.n}")
    pof = P.part_of
    qedges = set()
    for u, v in G.edges:
        a, b = pof[u], pof[v]
        if a != b:
            qedges.add((a, b) if a < b else (b, a))
    return OrderedGraph(len(P.parts), sorted(qedges))


def graph_power(G: OrderedGraph, k: int) -> OrderedGraph:
    """Graph on V(G) joining distinct vertices at distance at most ``k``."""
    if k < 1:
        raise ValueError("graph_power needs k >= 1")
    adj = G.adjacency()
    edges = []
    for s in range(G.n):
        for t in _bfs_dist(adj, s, limit=k):
            if t > s:
                edges.append((s, t))
    return OrderedGraph(G.n, edges)


def path_graph(n: int) -> OrderedGraph:
    return OrderedGraph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> OrderedGraph:
    return OrderedGraph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> OrderedGraph:
    return OrderedGraph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star_graph(leaves: int) -> OrderedGraph:
    return OrderedGraph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def hypercube_graph(d: int) -> OrderedGraph:
    n = 1 << d
    return OrderedGraph(n, [(v, v | (1 << b)) for v in range(n) for b in range(d) if not v >> b & 1])


# -- text format ---------------------------------------------------------------


def _fmt_label(lab: Label) -> str:
    s, e = lab
    return s if e == 1 else f"{s}^-1"


def _parse_label(tok: str) -> Label:
    if tok.endswith("^-1"):
        return (tok[:-3], -1)
    return (tok, 1)


def write_graph(G: OrderedGraph) -> str:
    lines = []
    if G.alphabet is not None:
        lines.append("alphabet " + " ".join(G.alphabet))
    lines.append(f"{G.n} {G.m}")
    for i, (u, v) in enumerate(G.edges):
        if G.labels is not None:
            lines.append(f"{u} {v} {_fmt_label(G.labels[i])}")
        else:
            lines.append(f"{u} {v}")
    return "\n".join(lines) + "\n"


def read_graph(text: str, multigraph: bool = False) -> OrderedGraph:
    """Parse the edge-list format: optional ``alphabet`` line, ``n m``, then ``u v [label]``."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise StructuralError("empty graph file")
    alphabet = None
    if lines[0].startswith("alphabet"):
        alphabet = lines[0].split()[1:]
        lines = lines[1:]
    try:
        n, m = (int(t) for t in lines[0].split())
    except ValueError as exc:
        raise StructuralError(f"bad header line {lines[0]!r}") from exc
    body = lines[1:]
    if len(body) != m:
        raise StructuralError(f"header announces {m} edges, found {len(body)}")
    edges, labels = [], []
    for ln in body:
        toks = ln.split()
        if len(toks) not in (2, 3):
            raise StructuralError(f"bad edge line {ln!r}")
        try:
            edges.append((int(toks[0]), int(toks[1])))
        except ValueError as exc:
            raise StructuralError(f"bad edge line {ln!r}") from exc
        if len(toks) == 3:
            labels.append(_parse_label(toks[2]))
    if labels and len(labels) != m:
        raise StructuralError("either every edge carries a label or none does")
    labs = labels if labels else None
    return OrderedGraph(n, edges, labels=labs, alphabet=alphabet, _multi=multigraph)
