"""Random bounded-degree graphs of large girth and small diameter.

Pipeline: sample a union of three perfect matchings, delete one edge from
every short cycle, then overlay a degree-3 tree on a maximal set of far-apart
vertices. Every output is checked against exact integer versions of the
degree, diameter and girth thresholds.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ConstructionAbort, ScheduleError
from .graph_core import OrderedGraph, diameter, girth, is_connected

RNG_NAME = "pcg64-lemire-v1"
MATCHING_LABELS = ("1", "2", "3")


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """PCG64 seeded from ``(seed, *stream)``; bounded draws use Lemire's method."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), *map(int, stream)])))


@dataclass(frozen=True)
class C1Graph:
    """Union of three labelled perfect matchings on ``0..n-1``."""

    n: int
    matchings: tuple

    def __post_init__(self):
        if len(self.matchings) != 3:
            raise ValueError("exactly three matchings")
        for M in self.matchings:
            seen = sorted(v for e in M for v in e)
            if seen != list(range(self.n)):
                raise ValueError("each matching must be perfect")

    def graph(self) -> OrderedGraph:
        edges, labels = [], []
        for lab, M in zip(MATCHING_LABELS, self.matchings):
            for u, v in M:
                edges.append((u, v))
                labels.append((lab, 1))
        return OrderedGraph.multigraph(self.n, edges, labels, MATCHING_LABELS)


def random_perfect_matching(n: int, rng: np.random.Generator) -> tuple:
    """Fisher-Yates shuffle of ``0..n-1`` paired off consecutively."""
    a = list(range(n))
    offs = rng.integers(0, np.arange(n, 0, -1))
    for i in range(n - 1):
        j = i + int(offs[i])
        a[i], a[j] = a[j], a[i]
    return tuple((min(a[i], a[i + 1]), max(a[i], a[i + 1])) for i in range(0, n, 2))


def sample_c1(n: int, seed: int, *stream: int) -> C1Graph:
    if n < 2 or n % 2:
        raise ValueError(f"n must be even and at least 2, got {n}")
    rng = make_rng(seed, n, *stream)
    return C1Graph(n, tuple(random_perfect_matching(n, rng) for _ in range(3)))


def short_cycles(G: OrderedGraph, g: float) -> list:
    """All cycles with at most floor(g) edges, each as a sorted tuple of edge ids.

    Parallel edges give 2-cycles. Each cycle is found from its smallest vertex
    by a depth-bounded search through larger vertices.
    """
    L = math.floor(g)
    if L < 2:
        return []
    inc = [[] for _ in range(G.n)]
    for eid, (u, v) in enumerate(G.edges):
        inc[u].append((eid, v))
        inc[v].append((eid, u))
    found = set()

    def dfs(s, u, path_v, path_e):
        for eid, w in inc[u]:
            if eid == path_e[-1]:
                continue
            if w == s:
                found.add(tuple(sorted(path_e + [eid])))
            elif w > s and w not in path_v and len(path_e) + 1 < L:
                path_v.add(w)
                dfs(s, w, path_v, path_e + [eid])
                path_v.discard(w)

    for s in range(G.n):
        for eid, w in inc[s]:
            if w > s:
                dfs(s, w, {s, w}, [eid])
    return sorted(found, key=lambda c: (len(c), c))


def _ball(adj, src: int, radius: int) -> list:
    seen = {src}
    frontier = [src]
    for _ in range(radius):
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return list(seen)


def tree_parent(i: int) -> int:
    """Parent position in the degree-3 tree: root 0 has children 1, 2, 3 and
    node i >= 1 has children 2i + 2 and 2i + 3."""
    return 0 if i <= 3 else (i - 2) // 2


@dataclass
class C2Certificate:
    n: int
    max_degree: int
    diameter: float
    girth: float
    simple: bool
    connected: bool
    degree_ok: bool
    diameter_ok: bool
    girth_ok: bool
    edits: int = 0
    thresholds: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.simple and self.connected and self.degree_ok and self.diameter_ok and self.girth_ok

    def to_text(self) -> str:
        lines = [f"n {self.n}", f"max_degree {self.max_degree} <= 6 {_yn(self.degree_ok)}",
                 f"diameter {_num(self.diameter)} <= 3*log2(n) = {3 * math.log2(self.n):.4f} {_yn(self.diameter_ok)}",
                 f"girth {_num(self.girth)} > log2(n)/4 = {math.log2(self.n) / 4:.4f} {_yn(self.girth_ok)}",
                 f"simple {_yn(self.simple)}", f"connected {_yn(self.connected)}",
                 f"edits {self.edits}", f"result {'PASS' if self.passed else 'FAIL'}"]
        return "\n".join(lines) + "\n"


def _yn(b: bool) -> str:
    return "ok" if b else "FAILED"


def _num(x: float):
    return "inf" if x == math.inf else int(x)


def c2_conditions(n: int, max_degree: int, diam: float, gi: float) -> tuple:
    """``(degree <= 6, diam <= 3 log2 n, girth > log2(n)/4)`` in integer arithmetic."""
    diam_ok = diam != math.inf and 2 ** int(diam) <= n ** 3
    girth_ok = gi == math.inf or 2 ** (4 * int(gi)) > n
    return max_degree <= 6, diam_ok, girth_ok


def certify_c2(G: OrderedGraph, edits: int = 0) -> C2Certificate:
    """Measure degree, diameter and girth and compare exactly.

    ``diam <= 3 log2 n`` is tested as ``2**diam <= n**3`` and ``girth > log2(n)/4``
    as ``2**(4*girth) > n``.
    """
    n = G.n
    simple = not G.is_multigraph or len(G.edge_set) == G.m
    conn = is_connected(G)
    D = G.max_degree()
    diam = diameter(G) if conn else math.inf
    gi = girth(G)
    deg_ok, diam_ok, girth_ok = c2_conditions(n, D, diam, gi)
    return C2Certificate(n, D, diam, gi, simple, conn, deg_ok, diam_ok, girth_ok, edits,
                         {"max_degree": 6, "diameter": 3 * math.log2(n), "girth": math.log2(n) / 4})


@dataclass
class EditResult:
    graph: OrderedGraph
    certificate: C2Certificate
    deleted: tuple
    X: tuple
    tree_edges: tuple
    cycles: int

    def stats(self) -> dict:
        c = self.certificate
        return {"n": c.n, "cycles": self.cycles, "F": len(self.deleted), "X": len(self.X),
                "edits": c.edits, "aborted": False, "max_degree": c.max_degree,
                "diameter": _num(c.diameter), "girth": _num(c.girth), "passed": c.passed}


def cycle_length_bound(n: int) -> float:
    return math.log2(n) / 4


def edit_to_c2(G1: C1Graph, cycle_length: Optional[int] = None) -> EditResult:
    """Edit a sampled graph into the target class, or raise ConstructionAbort.

    ``cycle_length`` overrides the hitting length (default floor(log2(n)/4), and
    never below 2 so parallel edges are always removed). Far-apart vertices are
    at distance at least max(ceil(log2 n), cycle_length).
    """
    n = G1.n
    g = cycle_length_bound(n)
    L = max(2, math.floor(g) if cycle_length is None else int(cycle_length))
    H = G1.graph()
    cycles = short_cycles(H, L)
    F: set = set()
    for cyc in cycles:
        if F.isdisjoint(cyc):
            F.add(cyc[0])
    limit = 4 * 6 ** (g if cycle_length is None else L)
    if len(F) > limit:
        raise ConstructionAbort(f"{len(F)} deletions exceed 4*6^g = {limit:.1f}",
                                {"n": n, "cycles": len(cycles), "F": len(F), "aborted": True})
    keep = [e for i, e in enumerate(H.edges) if i not in F]
    G2 = OrderedGraph(n, sorted((min(u, v), max(u, v)) for u, v in keep))
    adj = G2.adjacency()
    d = max(math.ceil(math.log2(n)), L)
    blocked = [False] * n
    X = []
    for v in range(n):
        if not blocked[v]:
            X.append(v)
            for w in _ball(adj, v, d - 1):
                blocked[w] = True
    tree = tuple((X[tree_parent(i)], X[i]) for i in range(1, len(X)))
    edges = sorted(G2.edges + tuple((min(a, b), max(a, b)) for a, b in tree))
    G3 = OrderedGraph(n, edges)
    cert = certify_c2(G3, len(F) + len(tree))
    stats = {"n": n, "cycles": len(cycles), "F": len(F), "X": len(X), "aborted": True}
    if not cert.connected:
        raise ConstructionAbort("edited graph is disconnected", dict(stats, reason="disconnected"))
    if not cert.passed:
        raise RuntimeError("certificate failed after a successful edit:\n" + cert.to_text())
    return EditResult(G3, cert, tuple(sorted(F)), tuple(X), tree, len(cycles))


def construct(n: int, seed: int, attempt: int = 0, cycle_length: Optional[int] = None) -> EditResult:
    return edit_to_c2(sample_c1(n, seed, attempt), cycle_length)


@dataclass
class SequenceResult:
    graphs: list
    attempts: list
    ratio: float

    def report(self) -> dict:
        return {"attempts": self.attempts, "A": self.ratio,
                "graphs": [r.stats() for r in self.graphs]}


def generate_sequence(n_schedule: Sequence[int], seed: int, raise_girth: bool = False,
                      max_attempts: int = 20) -> SequenceResult:
    """Certified graphs for each n in the schedule with girth growing by 6 each step.

    A graph whose girth is below the previous girth plus 6 is resampled. With
    ``raise_girth`` the cycle-hitting length is lifted to that target so the
    increment holds by construction. The realised ratio max diam/girth is reported.
    """
    ns = list(n_schedule)
    if any(n < 2 or n % 2 for n in ns) or any(a >= b for a, b in zip(ns, ns[1:])):
        raise ValueError("schedule must be strictly increasing even integers >= 2")
    out, tries = [], []
    prev = None
    for k, n in enumerate(ns):
        need = None if prev is None else prev + 6
        L = None if (need is None or not raise_girth) else max(math.floor(cycle_length_bound(n)), need - 1)
        got = None
        for attempt in range(max_attempts):
            try:
                res = edit_to_c2(sample_c1(n, seed, k, attempt), L)
            except ConstructionAbort:
                continue
            except RuntimeError:
                if L is None:
                    raise
                continue
            if need is None or res.certificate.girth >= need:
                got = res
                tries.append(attempt + 1)
                break
        if got is None:
            raise ScheduleError(f"no certified graph on n={n} with girth >= {need} after {max_attempts} attempts; "
                                "use larger gaps between consecutive sizes")
        out.append(got)
        prev = got.certificate.girth
    ratio = max(r.certificate.diameter / r.certificate.girth for r in out)
    return SequenceResult(out, tries, ratio)


def certificate_dict(c: C2Certificate) -> dict:
    d = asdict(c)
    d["passed"] = c.passed
    d["diameter"] = _num(c.diameter)
    d["girth"] = _num(c.girth)
    return d
