"""Strict twin-width of graphs and matrices: certificates, verifiers, solvers, oracles.

Conventions: the width of a sequence is the largest maximum degree over every
quotient it passes through, the starting singleton partition/division included.
The empty graph and the empty matrix have width 0.
"""
from __future__ import annotations

import heapq
import json
import time
from bisect import bisect_left
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence, Union

import numpy as np

from .errors import CertificateInvalid, RefusalError, SolverTimeout, StructuralError
from .graph_core import OrderedGraph
from .matrix_core import OrderedMatrix


# -- certificates ----------------------------------------------------------------


@dataclass(frozen=True)
class PartitionSequence:
    """Merges applied to the singleton partition of ``range(n)``.

    A part is named by its smallest vertex; merging ``(a, b)`` fuses the parts
    named ``a`` and ``b`` into one named ``min(a, b)``.
    """

    n: int
    merges: tuple
    claimed_width: int

    kind = "partition_sequence"

    def to_json(self) -> str:
        return json.dumps({"kind": self.kind, "n": self.n,
                           "merges": [list(m) for m in self.merges],
                           "claimed_width": self.claimed_width}, indent=None) + "\n"


@dataclass(frozen=True)
class DivisionSequence:
    """Cut removals applied to the all-singletons division of an ``r x c`` matrix.

    ``("row", p)`` removes the cut between row positions ``p-1`` and ``p``.
    """

    shape: tuple
    merges: tuple
    claimed_width: int

    kind = "division_sequence"

    def to_json(self) -> str:
        return json.dumps({"kind": self.kind, "shape": list(self.shape),
                           "merges": [list(m) for m in self.merges],
                           "claimed_width": self.claimed_width}, indent=None) + "\n"


Certificate = Union[PartitionSequence, DivisionSequence]


def certificate_from_json(text: str) -> Certificate:
    try:
        d = json.loads(text)
        kind = d["kind"]
        if kind == "partition_sequence":
            return PartitionSequence(int(d["n"]), tuple((int(a), int(b)) for a, b in d["merges"]),
                                     int(d["claimed_width"]))
        if kind == "division_sequence":
            merges = tuple((str(ax), int(p)) for ax, p in d["merges"])
            return DivisionSequence(tuple(int(x) for x in d["shape"]), merges, int(d["claimed_width"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise StructuralError(f"malformed certificate: {exc}") from exc
    raise StructuralError(f"unknown certificate kind {kind!r}")


# -- verifiers -------------------------------------------------------------------


def verify_partition_sequence(G: OrderedGraph, s: PartitionSequence) -> int:
    """Replay ``s`` on ``G`` and return the width it actually achieves."""
    n = G.n
    if s.n != n:
        raise CertificateInvalid(f"certificate is for {s.n} vertices, graph has {n}")
    if n and len(s.merges) != n - 1:
        raise CertificateInvalid(f"expected {n - 1} merges, got {len(s.merges)}")
    if n == 0 and s.merges:
        raise CertificateInvalid("empty graph takes no merges")
    nb = {v: set() for v in range(n)}
    for u, v in G.edge_set:
        nb[u].add(v)
        nb[v].add(u)
    width = max((len(x) for x in nb.values()), default=0)
    for step, (a, b) in enumerate(s.merges):
        if a == b or a not in nb or b not in nb:
            raise CertificateInvalid(f"step {step}: merge ({a}, {b}) does not name two live parts", step)
        keep, gone = min(a, b), max(a, b)
        merged = (nb[keep] | nb[gone]) - {keep, gone}
        for x in nb[gone]:
            if x != keep:
                nb[x].discard(gone)
                nb[x].add(keep)
        nb[keep].discard(gone)
        del nb[gone]
        nb[keep] = merged
        # only the merged part can gain degree
        width = max(width, len(merged))
    return width


def verify_division_sequence(M: OrderedMatrix, s: DivisionSequence) -> int:
    """Replay ``s`` on ``M`` and return the width it actually achieves."""
    r, c = M.shape
    if tuple(s.shape) != (r, c):
        raise CertificateInvalid(f"certificate is for shape {tuple(s.shape)}, matrix is {(r, c)}")
    need = max(r - 1, 0) + max(c - 1, 0)
    if len(s.merges) != need:
        raise CertificateInvalid(f"expected {need} cut removals, got {len(s.merges)}")
    # parts named by their first position; zone sets between row parts and col parts
    row_nb = {i: set() for i in range(r)}
    col_nb = {j: set() for j in range(c)}
    for i, j in M.ones:
        row_nb[i].add(j)
        col_nb[j].add(i)
    cuts = {"row": list(range(1, r)), "col": list(range(1, c))}
    width = max([len(x) for x in row_nb.values()] + [len(x) for x in col_nb.values()], default=0)
    for step, (axis, p) in enumerate(s.merges):
        if axis not in cuts:
            raise CertificateInvalid(f"step {step}: unknown axis {axis!r}", step)
        cl = cuts[axis]
        k = bisect_left(cl, p)
        if k == len(cl) or cl[k] != p:
            raise CertificateInvalid(f"step {step}: no {axis} cut at {p}", step)
        prev = cl[k - 1] if k > 0 else 0
        del cl[k]
        mine, other = (row_nb, col_nb) if axis == "row" else (col_nb, row_nb)
        merged = mine[prev] | mine[p]
        for x in mine[p]:
            other[x].discard(p)
            other[x].add(prev)
        del mine[p]
        mine[prev] = merged
        width = max(width, len(merged))
    return width


def verify_certificate(x, cert: Certificate) -> int:
    if isinstance(cert, PartitionSequence):
        if not isinstance(x, OrderedGraph):
            raise CertificateInvalid("partition sequence needs a graph")
        return verify_partition_sequence(x, cert)
    if not isinstance(x, OrderedMatrix):
        raise CertificateInvalid("division sequence needs a matrix")
    return verify_division_sequence(x, cert)


# -- budgets and results ---------------------------------------------------------


@dataclass(frozen=True)
class SearchBudget:
    """Per-threshold node limit plus an optional overall wall-clock limit (seconds)."""

    nodes: int = 2_000_000
    seconds: Optional[float] = None


@dataclass
class ThresholdOutcome:
    k: int
    status: str  # "feasible" | "infeasible" | "unknown"
    merges: tuple = ()
    nodes: int = 0


# -- graph search ----------------------------------------------------------------


def _graph_masks(G: OrderedGraph) -> list:
    adj = [0] * G.n
    for u, v in G.edge_set:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return adj


def _lowbit_index(x: int) -> int:
    return (x & -x).bit_length() - 1


def _graph_threshold(n: int, adj: list, k: int, node_limit: int, deadline: Optional[float]) -> ThresholdOutcome:
    """DFS for a partition sequence of width <= k (starting degrees assumed <= k)."""
    failed = set()
    nodes = 0
    path = []

    def finish(parts):
        reps = sorted(_lowbit_index(p) for p in parts)
        out = []
        while len(reps) > 1:
            a, b = reps[0], reps[1]
            out.append((a, b))
            reps.pop(1)
        return out

    class _Stop(Exception):
        pass

    def dfs(parts: tuple) -> bool:
        nonlocal nodes
        p = len(parts)
        if p <= k + 1:
            path.extend(finish(parts))
            return True
        if parts in failed:
            return False
        nodes += 1
        if nodes > node_limit or (deadline is not None and nodes % 4096 == 0 and time.monotonic() > deadline):
            raise _Stop
        # part-level neighbourhoods as bitmasks over part indices
        owner = [0] * n
        for i, P in enumerate(parts):
            x = P
            while x:
                lb = x & -x
                owner[lb.bit_length() - 1] = 1 << i
                x ^= lb
        pn = []
        for i, P in enumerate(parts):
            nbm = 0
            x = P
            while x:
                lb = x & -x
                nbm |= adj[lb.bit_length() - 1]
                x ^= lb
            nbm &= ~P
            q = 0
            while nbm:
                lb = nbm & -nbm
                o = owner[lb.bit_length() - 1]
                q |= o
                nbm &= ~parts[o.bit_length() - 1]
            pn.append(q)
        moves = []
        for i in range(p):
            for j in range(i + 1, p):
                d = ((pn[i] | pn[j]) & ~((1 << i) | (1 << j))).bit_count()
                if d <= k:
                    moves.append((d, i, j))
        moves.sort()
        for d, i, j in moves:
            merged = parts[i] | parts[j]
            nxt = tuple(sorted([q for t, q in enumerate(parts) if t != i and t != j] + [merged],
                               key=_lowbit_min))
            path.append((_lowbit_index(parts[i]), _lowbit_index(parts[j])))
            if dfs(nxt):
                return True
            path.pop()
        failed.add(parts)
        return False

    start = tuple(1 << v for v in range(n))
    try:
        ok = dfs(start)
    except _Stop:
        return ThresholdOutcome(k, "unknown", nodes=nodes)
    if ok:
        return ThresholdOutcome(k, "feasible", tuple((min(a, b), max(a, b)) for a, b in path), nodes)
    return ThresholdOutcome(k, "infeasible", nodes=nodes)


def _lowbit_min(x: int) -> int:
    return x & -x


# -- matrix search ---------------------------------------------------------------


def _interval_masks(cuts_mask: int, size: int) -> list:
    """Interval bitmasks for the parts given by a bitmask of cut positions."""
    out = []
    start = 0
    for p in range(1, size + 1):
        if p == size or cuts_mask >> p & 1:
            out.append(((1 << p) - 1) ^ ((1 << start) - 1))
            start = p
    return out


def _matrix_threshold(r: int, c: int, rowmask: list, colmask: list, k: int, node_limit: int,
                      deadline: Optional[float]) -> ThresholdOutcome:
    """DFS for a division sequence of width <= k (starting degrees assumed <= k)."""
    failed = set()
    nodes = 0
    path = []
    full_r = sum(1 << p for p in range(1, r))
    full_c = sum(1 << p for p in range(1, c))

    class _Stop(Exception):
        pass

    def part_degrees(lines_mask, cuts, size):
        """For each part along one axis: (start, end, union mask of the other axis)."""
        parts = []
        start = 0
        for p in range(1, size + 1):
            if p == size or cuts >> p & 1:
                m = 0
                for t in range(start, p):
                    m |= lines_mask[t]
                parts.append((start, p, m))
                start = p
        return parts

    def count_hits(m, intervals):
        return sum(1 for I in intervals if m & I)

    def dfs(rc: int, cc: int) -> bool:
        nonlocal nodes
        nr = rc.bit_count() + 1
        nc = cc.bit_count() + 1
        if nr <= k or nc <= k:
            # every later quotient has row degree <= nc or column degree <= nr
            if nc <= k:
                path.extend(("row", p) for p in range(1, r) if rc >> p & 1)
                path.extend(("col", p) for p in range(1, c) if cc >> p & 1)
            else:
                path.extend(("col", p) for p in range(1, c) if cc >> p & 1)
                path.extend(("row", p) for p in range(1, r) if rc >> p & 1)
            return True
        key = (rc, cc)
        if key in failed:
            return False
        nodes += 1
        if nodes > node_limit or (deadline is not None and nodes % 4096 == 0 and time.monotonic() > deadline):
            raise _Stop
        rparts = part_degrees(rowmask, rc, r)
        cparts = part_degrees(colmask, cc, c)
        cint = _interval_masks(cc, c)
        rint = _interval_masks(rc, r)
        moves = []
        for t in range(1, len(rparts)):
            d = count_hits(rparts[t - 1][2] | rparts[t][2], cint)
            if d <= k:
                moves.append((d, 0, rparts[t][0]))
        for t in range(1, len(cparts)):
            d = count_hits(cparts[t - 1][2] | cparts[t][2], rint)
            if d <= k:
                moves.append((d, 1, cparts[t][0]))
        moves.sort()
        for d, ax, p in moves:
            if ax == 0:
                path.append(("row", p))
                ok = dfs(rc & ~(1 << p), cc)
            else:
                path.append(("col", p))
                ok = dfs(rc, cc & ~(1 << p))
            if ok:
                return True
            path.pop()
        failed.add(key)
        return False

    try:
        ok = dfs(full_r, full_c)
    except _Stop:
        return ThresholdOutcome(k, "unknown", nodes=nodes)
    if ok:
        return ThresholdOutcome(k, "feasible", tuple(path), nodes)
    return ThresholdOutcome(k, "infeasible", nodes=nodes)


def _run_threshold(args):
    kind = args[0]
    if kind == "graph":
        _, n, adj, k, lim, deadline = args
        return _graph_threshold(n, adj, k, lim, deadline)
    _, r, c, rm, cm, k, lim, deadline = args
    return _matrix_threshold(r, c, rm, cm, k, lim, deadline)


def _solve_thresholds(make_args, lb: int, ub: int, budget: SearchBudget, workers: int):
    """Search thresholds ``lb..ub-1``; return the smallest proven-feasible one.

    Each threshold is an independent deterministic search with its own node
    budget, so the outcome does not depend on ``workers``.
    Returns ``(k, outcome)``; ``outcome`` is None when ``ub`` itself is the answer.
    Raises SolverTimeout(best k) when some smaller threshold stayed undecided.
    """
    deadline = None if budget.seconds is None else time.monotonic() + budget.seconds
    ks = list(range(lb, ub))
    outcomes = {}
    if workers > 1 and len(ks) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(ks))) as ex:
            for k, res in zip(ks, ex.map(_run_threshold, [make_args(k, budget.nodes, deadline) for k in ks])):
                outcomes[k] = res
    else:
        for k in ks:
            res = _run_threshold(make_args(k, budget.nodes, deadline))
            outcomes[k] = res
            if res.status == "feasible":
                break
    undecided = None
    for k in ks:
        res = outcomes.get(k)
        if res is None:
            break
        if res.status == "unknown" and undecided is None:
            undecided = k
        if res.status == "feasible":
            return k, res, undecided
    return ub, None, undecided


def stww_graph_exact(G: OrderedGraph, budget: Optional[SearchBudget] = None, workers: int = 1):
    """Minimum width of a partition sequence of ``G`` with a certificate.

    Raises SolverTimeout (carrying the best certified upper bound) when the
    node or time budget runs out before optimality is proven.
    """
    budget = budget or SearchBudget()
    n = G.n
    if n <= 1:
        return 0, PartitionSequence(n, (), 0)
    if n > 62:
        raise RefusalError("exact graph search is limited to 62 vertices")
    lb = G.max_degree()
    ub, ucert = stww_upper_heuristic(G)
    adj = _graph_masks(G)
    k, res, undecided = _solve_thresholds(lambda k, lim, dl: ("graph", n, adj, k, lim, dl), lb, ub, budget, workers)
    cert = ucert if res is None else PartitionSequence(n, res.merges, k)
    w = verify_partition_sequence(G, cert)
    cert = PartitionSequence(n, cert.merges, w)
    if undecided is not None:
        raise SolverTimeout(f"threshold {undecided} undecided within budget", w, cert, undecided)
    return w, cert


def stww_matrix_exact(M: OrderedMatrix, budget: Optional[SearchBudget] = None, workers: int = 1):
    """Minimum width of a division sequence of ``M`` with a certificate."""
    budget = budget or SearchBudget()
    r, c = M.shape
    if r == 0 or c == 0 or not M.ones:
        cert = DivisionSequence((r, c), tuple(("row", p) for p in range(1, r)) + tuple(("col", p) for p in range(1, c)), 0)
        return 0, cert
    rows = sorted({i for i, _ in M.ones})
    cols = sorted({j for _, j in M.ones})
    if len(rows) < r or len(cols) < c:
        # empty lines never change the width; solve without them and absorb them first
        try:
            w, sub = stww_matrix_exact(M.submatrix(rows, cols), budget, workers)
        except SolverTimeout as exc:
            cert = _lift_trimmed(M, rows, cols, exc.best_certificate)
            raise SolverTimeout(str(exc), verify_division_sequence(M, cert), cert, exc.lower_bound) from None
        cert = _lift_trimmed(M, rows, cols, sub)
        return verify_division_sequence(M, cert), cert
    if r > 62 or c > 62:
        raise RefusalError("exact matrix search is limited to 62 rows and columns")
    lb = M.max_degree()
    ub, ucert = stww_upper_heuristic(M)
    rm = [0] * r
    cm = [0] * c
    for i, j in M.ones:
        rm[i] |= 1 << j
        cm[j] |= 1 << i
    k, res, undecided = _solve_thresholds(lambda k, lim, dl: ("matrix", r, c, rm, cm, k, lim, dl),
                                          lb, ub, budget, workers)
    cert = ucert if res is None else DivisionSequence((r, c), res.merges, k)
    w = verify_division_sequence(M, cert)
    cert = DivisionSequence((r, c), cert.merges, w)
    if undecided is not None:
        raise SolverTimeout(f"threshold {undecided} undecided within budget", w, cert, undecided)
    return w, cert


def _lift_trimmed(M: OrderedMatrix, rows: list, cols: list, sub: DivisionSequence) -> DivisionSequence:
    """Division sequence of ``M`` from one of its non-empty rows/columns.

    Each empty line is first merged into the preceding non-empty line (leading
    ones into the first), which changes no degree; a cut q of the trimmed matrix
    is then the cut just before original line ``rows[q]`` (or ``cols[q]``).
    """
    merges = []
    for axis, keep, size in (("row", rows, M.nrows), ("col", cols, M.ncols)):
        keepset = set(keep)
        merges.extend((axis, p) for p in range(1, size) if p not in keepset)
        if keep[0] > 0:
            merges.append((axis, keep[0]))
    mapping = {"row": rows, "col": cols}
    merges.extend((axis, mapping[axis][q]) for axis, q in sub.merges)
    return DivisionSequence(M.shape, tuple(merges), sub.claimed_width)


# -- heuristics ------------------------------------------------------------------


def stww_upper_heuristic(x):
    """Greedy certified upper bound for a graph or a matrix."""
    if isinstance(x, OrderedGraph):
        cert = _greedy_graph(x)
        w = verify_partition_sequence(x, cert)
        return w, PartitionSequence(cert.n, cert.merges, w)
    cert = _greedy_matrix(x)
    w = verify_division_sequence(x, cert)
    return w, DivisionSequence(cert.shape, cert.merges, w)


def _greedy_graph(G: OrderedGraph) -> PartitionSequence:
    """Repeatedly merge the pair whose merged part has the fewest neighbours.

    Candidates are pairs at quotient distance <= 2 (a lazy heap keeps them
    current); if none remain, the two parts of least degree are merged.
    """
    n = G.n
    nb = {v: set() for v in range(n)}
    for u, v in G.edge_set:
        nb[u].add(v)
        nb[v].add(u)
    version = {v: 0 for v in range(n)}
    heap = []

    def push(a, b):
        if a > b:
            a, b = b, a
        d = len((nb[a] | nb[b]) - {a, b})
        heapq.heappush(heap, (d, a, b, version[a], version[b]))

    small = n <= 40
    if small:
        for a, b in combinations(range(n), 2):
            push(a, b)
    else:
        for a in range(n):
            near = set(nb[a])
            for y in nb[a]:
                near |= nb[y]
            for b in near:
                if b > a:
                    push(a, b)
    merges = []
    while len(nb) > 1:
        best = None
        while heap:
            d, a, b, va, vb = heapq.heappop(heap)
            if a not in nb or b not in nb:
                continue
            if version[a] != va or version[b] != vb:
                push(a, b)
                continue
            best = (a, b)
            break
        if best is None:
            live = sorted(nb, key=lambda v: (len(nb[v]), v))
            best = tuple(sorted(live[:2]))
        a, b = best
        merges.append((a, b))
        merged = (nb[a] | nb[b]) - {a, b}
        touched = {a}
        for y in nb[b]:
            if y != a:
                nb[y].discard(b)
                nb[y].add(a)
        for y in merged:
            touched.add(y)
        del nb[b]
        del version[b]
        nb[a] = merged
        for t in touched:
            version[t] += 1
        if small:
            for y in nb:
                if y != a:
                    push(a, y)
        else:
            near = set(merged)
            for y in merged:
                near |= nb[y]
            near.discard(a)
            for y in near:
                push(a, y)
            # neighbours' pairs may have improved; refresh them lazily
            for y in merged:
                for z in nb[y]:
                    if z != y:
                        push(y, z)
    return PartitionSequence(n, tuple(merges), 0)


def _greedy_matrix(M: OrderedMatrix) -> DivisionSequence:
    """Repeatedly remove the cut whose merged part has the fewest non-zero zones."""
    r, c = M.shape
    row_nb = {i: set() for i in range(r)}
    col_nb = {j: set() for j in range(c)}
    for i, j in M.ones:
        row_nb[i].add(j)
        col_nb[j].add(i)
    starts = {"row": list(range(r)), "col": list(range(c))}
    size = {"row": {i: 1 for i in range(r)}, "col": {j: 1 for j in range(c)}}
    merges = []
    while len(starts["row"]) > 1 or len(starts["col"]) > 1:
        best = None
        for ax_i, axis in enumerate(("row", "col")):
            mine = row_nb if axis == "row" else col_nb
            st = starts[axis]
            sz = size[axis]
            for t in range(1, len(st)):
                d = len(mine[st[t - 1]] | mine[st[t]])
                # ties go to the smallest merged interval, so blocks close bottom-up
                key = (d, sz[st[t - 1]] + sz[st[t]], len(mine[st[t - 1]]) + len(mine[st[t]]), ax_i, st[t])
                if best is None or key < best[0]:
                    best = (key, axis, t)
        _, axis, t = best
        st = starts[axis]
        prev, p = st[t - 1], st[t]
        mine, other = (row_nb, col_nb) if axis == "row" else (col_nb, row_nb)
        for x in mine[p]:
            other[x].discard(p)
            other[x].add(prev)
        mine[prev] = mine[prev] | mine[p]
        del mine[p]
        size[axis][prev] += size[axis].pop(p)
        del st[t]
        merges.append((axis, p))
    return DivisionSequence((r, c), tuple(merges), 0)


# -- brute-force oracles (tests only) ---------------------------------------------

ORACLE_GRAPH_CAP = 8
ORACLE_MATRIX_CAP = (6, 6)


def _set_partitions(n: int) -> list:
    """All set partitions of range(n) as tuples of restricted-growth labels."""
    out = []

    def rec(prefix, mx):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for lab in range(mx + 2):
            prefix.append(lab)
            rec(prefix, max(mx, lab))
            prefix.pop()

    if n == 0:
        return [()]
    rec([0], 0)
    return out


_PARTITION_TABLES: dict = {}


def _partition_table(n: int):
    """Partitions of range(n), their membership matrices and merge successors."""
    if n in _PARTITION_TABLES:
        return _PARTITION_TABLES[n]
    labs = _set_partitions(n)
    index = {lab: t for t, lab in enumerate(labs)}
    members = []
    succ = []
    for lab in labs:
        p = max(lab) + 1
        S = np.zeros((p, n), dtype=np.int64)
        for v, l in enumerate(lab):
            S[l, v] = 1
        members.append(S)
        nxt = []
        for a, b in combinations(range(p), 2):
            new = [a if l == b else l for l in lab]
            # renumber to restricted growth form
            ren = {}
            canon = tuple(ren.setdefault(l, len(ren)) for l in new)
            nxt.append(index[canon])
        succ.append(nxt)
    _PARTITION_TABLES[n] = (labs, members, succ)
    return _PARTITION_TABLES[n]


def oracle_stww_graphs(graphs: Sequence[OrderedGraph]) -> list:
    """Exhaustive minimum width over every merge sequence, for graphs of one size <= 8."""
    if not graphs:
        return []
    n = graphs[0].n
    if any(G.n != n for G in graphs):
        raise ValueError("batch graphs must share a vertex count")
    if n > ORACLE_GRAPH_CAP:
        raise RefusalError(f"oracle refuses graphs with more than {ORACLE_GRAPH_CAP} vertices")
    if n <= 1:
        return [0] * len(graphs)
    A = np.zeros((len(graphs), n, n), dtype=np.int64)
    for b, G in enumerate(graphs):
        for u, v in G.edge_set:
            A[b, u, v] = A[b, v, u] = 1
    labs, members, succ = _partition_table(n)
    deg = np.zeros((len(labs), len(graphs)), dtype=np.int64)
    for t, S in enumerate(members):
        Q = np.einsum("pi,bij,qj->bpq", S, A, S) > 0
        idx = np.arange(S.shape[0])
        Q[:, idx, idx] = False
        deg[t] = Q.sum(axis=2).max(axis=1)
    best = np.zeros_like(deg)
    order = sorted(range(len(labs)), key=lambda t: max(labs[t]))
    for t in order:
        if not succ[t]:
            best[t] = deg[t]
        else:
            best[t] = np.maximum(deg[t], best[succ[t]].min(axis=0))
    start = labs.index(tuple(range(n)))
    return [int(x) for x in best[start]]


def oracle_stww_matrices(arrays) -> list:
    """Exhaustive minimum width over all division sequences for a batch of equal-shape arrays."""
    A = np.asarray(arrays, dtype=bool)
    if A.ndim == 2:
        A = A[None]
    B, r, c = A.shape
    if r > ORACLE_MATRIX_CAP[0] or c > ORACLE_MATRIX_CAP[1]:
        raise RefusalError(f"oracle refuses matrices larger than {ORACLE_MATRIX_CAP}")
    if r == 0 or c == 0:
        return [0] * B
    # state = (row cut subset, col cut subset) as bitmasks over positions 1..size-1
    nrs, ncs = 1 << (r - 1), 1 << (c - 1)
    deg = np.zeros((nrs, ncs, B), dtype=np.int64)

    def starts(mask, size):
        return [0] + [p for p in range(1, size) if mask >> (p - 1) & 1]

    for rm in range(nrs):
        rs = starts(rm, r)
        Ar = np.logical_or.reduceat(A, rs, axis=1)
        for cmk in range(ncs):
            cs = starts(cmk, c)
            Q = np.logical_or.reduceat(Ar, cs, axis=2)
            deg[rm, cmk] = np.maximum(Q.sum(axis=2).max(axis=1), Q.sum(axis=1).max(axis=1))
    best = np.zeros_like(deg)
    # process states by increasing number of cuts so successors are done first
    states = sorted(((rm, cmk) for rm in range(nrs) for cmk in range(ncs)),
                    key=lambda s: s[0].bit_count() + s[1].bit_count())
    for rm, cmk in states:
        nxt = [best[rm & ~(1 << b), cmk] for b in range(r - 1) if rm >> b & 1]
        nxt += [best[rm, cmk & ~(1 << b)] for b in range(c - 1) if cmk >> b & 1]
        if nxt:
            best[rm, cmk] = np.maximum(deg[rm, cmk], np.min(nxt, axis=0))
        else:
            best[rm, cmk] = deg[rm, cmk]
    return [int(x) for x in best[nrs - 1, ncs - 1]]


def oracle_stww(x, cap: Optional[int] = None) -> int:
    """Brute-force strict twin-width of one small graph or matrix (tests only)."""
    if isinstance(x, OrderedGraph):
        if cap is not None and x.n > cap:
            raise RefusalError(f"graph has {x.n} vertices, cap is {cap}")
        return oracle_stww_graphs([x])[0]
    if cap is not None and max(x.shape) > cap:
        raise RefusalError(f"matrix shape {x.shape} exceeds cap {cap}")
    return oracle_stww_matrices(x.array())[0]
