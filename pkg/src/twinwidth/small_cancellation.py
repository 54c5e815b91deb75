"""Labelled graph families, their relators, the graphical small cancellation
condition, a resampling labelling search, and Dehn's algorithm."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import BudgetExceeded, StructuralError
from .graph_core import OrderedGraph, girth, read_graph, write_graph

Letter = tuple  # (symbol, +1 | -1)
DEFAULT_LAMBDA = Fraction(1, 6)


# -- words -----------------------------------------------------------------------


def inv_letter(x: Letter) -> Letter:
    return (x[0], -x[1])


def invert_word(w: Sequence[Letter]) -> tuple:
    return tuple(inv_letter(x) for x in reversed(w))


def free_reduce(w: Sequence[Letter]) -> tuple:
    out: list = []
    for x in w:
        if out and out[-1] == inv_letter(x):
            out.pop()
        else:
            out.append(tuple(x))
    return tuple(out)


def parse_word(text: str) -> tuple:
    """Whitespace-separated letters, ``^-1`` marks an inverse; ``1`` or nothing is empty."""
    toks = text.split()
    if toks == ["1"]:
        return ()
    out = []
    for t in toks:
        if t.endswith("^-1"):
            s, e = t[:-3], -1
        else:
            s, e = t, 1
        if not s or "^" in s:
            raise ValueError(f"bad letter {t!r}")
        out.append((s, e))
    return tuple(out)


def format_word(w: Sequence[Letter]) -> str:
    if not w:
        return "1"
    return " ".join(s if e == 1 else f"{s}^-1" for s, e in w)


def rotations(w: Sequence[Letter]) -> list:
    w = tuple(w)
    return [w[i:] + w[:i] for i in range(len(w))] or [()]


# -- labelled families -----------------------------------------------------------


class LabelledFamily:
    """Graphs whose edges carry letters; traversing ``edges[i]`` backwards reads
    the inverse of ``labels[i]``."""

    def __init__(self, graphs: Sequence[OrderedGraph], alphabet: Optional[Sequence[str]] = None):
        graphs = list(graphs)
        syms = set()
        for G in graphs:
            if G.m and G.labels is None:
                raise StructuralError("every edge of a family graph needs a label")
            syms |= {s for s, _ in (G.labels or ())}
        if alphabet is None:
            alphabet = sorted(syms)
        missing = syms - set(alphabet)
        if missing:
            raise StructuralError(f"labels outside alphabet: {sorted(missing)}")
        self.graphs = graphs
        self.alphabet = tuple(alphabet)
        self.girths = [girth(G) for G in graphs]

    def __len__(self):
        return len(self.graphs)

    def incidence(self, k: int) -> list:
        """Per vertex: ``(edge id, neighbour, letter read leaving through it)``."""
        G = self.graphs[k]
        inc = [[] for _ in range(G.n)]
        for eid, (u, v) in enumerate(G.edges):
            lab = G.labels[eid]
            inc[u].append((eid, v, lab))
            inc[v].append((eid, u, inv_letter(lab)))
        return inc

    def min_girth(self) -> float:
        return min(self.girths, default=math.inf)


def write_family(F: LabelledFamily, directory) -> list:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    paths = []
    for k, G in enumerate(F.graphs):
        p = d / f"g{k:03d}.graph"
        if G.alphabet is None:
            G = OrderedGraph.multigraph(G.n, G.edges, G.labels, F.alphabet) if G.is_multigraph else \
                OrderedGraph(G.n, G.edges, labels=G.labels, alphabet=F.alphabet)
        p.write_text(write_graph(G))
        paths.append(p)
    return paths


def read_family(directory) -> LabelledFamily:
    d = Path(directory)
    files = sorted(f for f in os.listdir(d) if f.endswith(".graph"))
    graphs = [read_graph((d / f).read_text(), multigraph=True) for f in files]
    alpha = None
    for G in graphs:
        if G.alphabet is not None:
            alpha = sorted(set(alpha or ()) | set(G.alphabet))
    return LabelledFamily(graphs, alpha)


# -- relators --------------------------------------------------------------------


def _cycle_words(F: LabelledFamily, k: int, max_len: int) -> set:
    """Words read along simple cycles of length <= max_len, both directions, all rotations."""
    inc = F.incidence(k)
    n = F.graphs[k].n
    out = set()

    def dfs(s, u, used_v, used_e, word):
        for eid, w, lab in inc[u]:
            if eid in used_e:
                continue
            if w == s:
                for r in rotations(word + [lab]):
                    out.add(r)
            elif w > s and w not in used_v and len(word) + 1 < max_len:
                used_v.add(w)
                used_e.append(eid)
                word.append(lab)
                dfs(s, w, used_v, used_e, word)
                word.pop()
                used_e.pop()
                used_v.discard(w)

    for s in range(n):
        dfs(s, s, {s}, [], [])
    return out


class RelatorOracle:
    """Lazy access to the relators of a family, by length bound.

    Graphs whose girth exceeds the bound are never inspected; ``inspected``
    counts graph visits so callers can observe that.
    """

    def __init__(self, F: LabelledFamily, certified_lambda: Optional[Fraction] = None):
        self.F = F
        self.certified_lambda = certified_lambda
        self.inspected = 0
        self._cache: dict = {}

    def relators(self, max_len: int) -> set:
        if max_len < 1:
            return set()
        out = set()
        for k, g in enumerate(self.F.girths):
            if g > max_len:
                continue
            key = (k, max_len)
            if key not in self._cache:
                self.inspected += 1
                self._cache[key] = _cycle_words(self.F, k, max_len)
            out |= self._cache[key]
        return out

    def is_relator(self, w: Sequence[Letter]) -> bool:
        w = tuple(tuple(x) for x in w)
        if len(w) < self.F.min_girth():
            return False
        return w in self.relators(len(w))


def extract_relators(F: LabelledFamily, max_len: int) -> set:
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    return RelatorOracle(F).relators(max_len)


# -- small cancellation ----------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    """Two distinct label-equal paths; each path is ``(graph, vertices, edge ids)``."""

    word: tuple
    first: tuple
    second: tuple

    def describe(self) -> str:
        return (f"word {format_word(self.word)}: graph {self.first[0]} path {list(self.first[1])} and "
                f"graph {self.second[0]} path {list(self.second[1])}")


@dataclass
class SmallCancellationResult:
    ok: bool
    lam: Fraction
    violation: Optional[Violation] = None
    paths_examined: int = 0


def _threshold(lam: Fraction, g1: float, g2: float) -> Optional[int]:
    """Smallest path length that must not be shared: ceil(lam * min girth)."""
    g = min(g1, g2)
    if g == math.inf:
        return None
    return max(1, math.ceil(lam * int(g)))


def _paths(F: LabelledFamily, k: int, length: int) -> dict:
    """word -> sorted list of (vertices, edge ids) over oriented simple paths."""
    inc = F.incidence(k)
    buckets: dict = {}

    def dfs(vs, es, word):
        if len(es) == length:
            buckets.setdefault(tuple(word), []).append((tuple(vs), tuple(es)))
            return
        for eid, w, lab in inc[vs[-1]]:
            if w in vs:
                continue
            vs.append(w)
            es.append(eid)
            word.append(lab)
            dfs(vs, es, word)
            vs.pop()
            es.pop()
            word.pop()

    for s in range(F.graphs[k].n):
        dfs([s], [], [])
    for v in buckets.values():
        v.sort()
    return buckets


def path_count_estimate(F: LabelledFamily, k: int, length: int) -> int:
    G = F.graphs[k]
    D = G.max_degree()
    return G.n * D * max(1, D - 1) ** max(0, length - 1)


def first_fold(F: LabelledFamily, k: int) -> Optional[Violation]:
    """Two edges leaving one vertex of graph k with the same letter, if any."""
    for v, ends in enumerate(F.incidence(k)):
        seen = {}
        for eid, w, lab in ends:
            if lab in seen:
                e0, w0 = seen[lab]
                return Violation((lab,), (k, (v, w0), (e0,)), (k, (v, w), (eid,)))
            seen[lab] = (eid, w)
    return None


def check_small_cancellation(F: LabelledFamily, lam=DEFAULT_LAMBDA, max_paths: int = 2_000_000,
                             graphs: Optional[Sequence[int]] = None,
                             require_reduced: bool = True) -> SmallCancellationResult:
    """Search for two distinct paths with the same word whose length reaches
    lam times the smaller girth of their graphs.

    Such a pair exists iff one exists at exactly the threshold length (a longer
    pair has a distinct aligned window of that length), so only that length is
    enumerated per graph pair. Pairs inside one graph are included. The first
    violation in (graph pair, word, paths) order is returned. ``graphs``
    restricts the pairs to those involving at least one listed graph.

    With ``require_reduced`` (the default) a vertex with two outgoing edges
    reading the same letter is reported first, as a pair of length-1 paths:
    Dehn's algorithm is only sound for reduced labellings, whose cycle words
    are cyclically reduced.
    """
    lam = Fraction(lam)
    if not 0 < lam < 1:
        raise ValueError("lambda must lie strictly between 0 and 1")
    K = len(F)
    if require_reduced:
        for k in range(K):
            if graphs is None or k in graphs:
                fold = first_fold(F, k)
                if fold is not None:
                    return SmallCancellationResult(False, lam, fold, 0)
    plan = []
    for a in range(K):
        for b in range(a, K):
            if graphs is not None and a not in graphs and b not in graphs:
                continue
            t = _threshold(lam, F.girths[a], F.girths[b])
            if t is not None:
                plan.append((a, b, t))
    need = {(a, t) for a, b, t in plan} | {(b, t) for a, b, t in plan}
    est = sum(path_count_estimate(F, k, t) for k, t in need)
    if est > max_paths:
        raise BudgetExceeded(f"about {est} paths to enumerate exceeds the budget {max_paths}", None)
    cache = {key: _paths(F, *key) for key in sorted(need)}
    examined = sum(len(p) for b in cache.values() for p in b.values())
    for a, b, t in plan:
        A, B = cache[(a, t)], cache[(b, t)]
        for word in sorted(A.keys() & B.keys()):
            pa, pb = A[word], B[word]
            if a == b:
                if len(pa) >= 2:
                    return SmallCancellationResult(False, lam, Violation(word, (a,) + pa[0], (a,) + pa[1]), examined)
            else:
                return SmallCancellationResult(False, lam, Violation(word, (a,) + pa[0], (b,) + pb[0]), examined)
    return SmallCancellationResult(True, lam, None, examined)


# -- labelling search -------------------------------------------------------------


@dataclass
class LabelSearchResult:
    ok: bool
    family: Optional[LabelledFamily]
    labelled_prefix: list = field(default_factory=list)
    resamples: list = field(default_factory=list)
    message: str = ""


def _letters(alphabet: Sequence[str]) -> list:
    return [(s, e) for s in alphabet for e in (1, -1)]


def label_search(graphs: Sequence[OrderedGraph], alphabet, lam=DEFAULT_LAMBDA, seed: int = 0,
                 retries: int = 1000, max_paths: int = 2_000_000) -> LabelSearchResult:
    """Label graphs one at a time, keeping earlier labels fixed.

    Each graph starts from uniformly random letters; while the checker reports
    a violation involving it, the letters on that graph's edges of the two
    offending paths are redrawn. Success is certified by the checker.
    """
    if isinstance(alphabet, int):
        alphabet = [chr(ord("a") + i) for i in range(alphabet)]
    alphabet = list(alphabet)
    letters = _letters(alphabet)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed)])))
    lam = Fraction(lam)
    done: list = []
    counts = []
    for k, G in enumerate(graphs):
        labs = [letters[int(i)] for i in rng.integers(0, len(letters), size=G.m)]
        tries = 0
        while True:
            H = OrderedGraph.multigraph(G.n, G.edges, labs, alphabet) if G.is_multigraph else \
                OrderedGraph(G.n, G.edges, labels=labs, alphabet=alphabet)
            fam = LabelledFamily(done + [H], alphabet)
            res = check_small_cancellation(fam, lam, max_paths, graphs=[k])
            if res.ok:
                done.append(H)
                counts.append(tries)
                break
            tries += 1
            if tries > retries:
                return LabelSearchResult(False, None, done, counts + [tries],
                                         f"graph {k}: no valid labelling within {retries} resamples")
            bad = set()
            for path in (res.violation.first, res.violation.second):
                if path[0] == k:
                    bad |= set(path[2])
            for eid in sorted(bad):
                labs[eid] = letters[int(rng.integers(0, len(letters)))]
    return LabelSearchResult(True, LabelledFamily(done, alphabet), done, counts)


# -- Dehn's algorithm -------------------------------------------------------------


@dataclass
class DehnResult:
    trivial: bool
    word: tuple
    final: tuple
    steps: list
    lam_asserted: Optional[Fraction]

    @property
    def verdict(self) -> str:
        return "trivial" if self.trivial else "nontrivial"


def dehn_rules(relators, max_len: int) -> dict:
    """Rewrite rules u -> v^-1 for every split r = uv of a relator with |u| > |r|/2.

    The set of relators is closed under rotation and inversion, so prefixes
    cover every piece of every cyclic conjugate. For each u the shortest, then
    least, replacement is kept.
    """
    rules: dict = {}
    for r in relators:
        if len(r) > max_len:
            continue
        for m in range(len(r) // 2 + 1, len(r) + 1):
            u, v = r[:m], r[m:]
            rep = invert_word(v)
            old = rules.get(u)
            if old is None or (len(rep), rep) < (len(old), old):
                rules[u] = rep
    return rules


def dehn_decide(w: Sequence[Letter], oracle: Optional[RelatorOracle] = None) -> DehnResult:
    """Freely reduce, then repeatedly replace the leftmost (then longest) factor
    that is more than half of a relator by the inverse of the rest.

    Only relators shorter than 2|w| can apply. Every step shortens the word.
    """
    w0 = tuple(tuple(x) for x in w)
    cur = free_reduce(w0)
    rels = oracle.relators(2 * len(cur) - 1) if (oracle is not None and cur) else set()
    rules = dehn_rules(rels, 2 * len(cur) - 1)
    lengths = sorted({len(u) for u in rules}, reverse=True)
    steps = []
    while cur:
        hit = None
        for i in range(len(cur)):
            for m in lengths:
                if i + m <= len(cur) and cur[i:i + m] in rules:
                    hit = (i, m)
                    break
            if hit:
                break
        if hit is None:
            break
        i, m = hit
        nxt = free_reduce(cur[:i] + rules[cur[i:i + m]] + cur[i + m:])
        assert len(nxt) < len(cur)
        steps.append((cur[i:i + m], rules[cur[i:i + m]]))
        cur = nxt
    lam = oracle.certified_lambda if oracle is not None else None
    return DehnResult(not cur, w0, cur, steps, lam)
