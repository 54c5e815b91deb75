"""Certificate transformers: build division/partition sequences for derived objects
(substitutions, products, quotients, powers, compositions, regular embeddings)
from sequences of their ingredients. Every output is replayed by the verifier."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import CertificateInvalid
from .graph_core import OrderedGraph, VertexPartition, _bfs_dist, graph_power, quotient_graph
from .grids import GridWitness, check_witness, contains_k_grid, grid_number_matrix, monochromatic_grid
from .matrix_core import OrderedMatrix, substitute, superpose, tensor
from .width import (
    DivisionSequence, PartitionSequence, verify_division_sequence, verify_partition_sequence,
)


@dataclass(frozen=True)
class LiftResult:
    """Output certificate, its verified width, and the bound it was built to meet."""

    cert: object
    width: int
    bound: int

    @property
    def within_bound(self) -> bool:
        return self.width <= self.bound


# -- substitution and products ---------------------------------------------------


def substitute_sequences(Mf: OrderedMatrix, cert_f: DivisionSequence, blocks: Mapping,
                         block_certs: Mapping):
    """Sequence for ``Mf[(a, f(a)) := blocks[...]]``: collapse every block with its
    own sequence (in row-group order), then replay ``cert_f`` on the groups.

    Returns ``(S, LiftResult)`` with bound ``max(width(cert_f), block widths)``.
    """
    wf = verify_division_sequence(Mf, cert_f)
    f = Mf.as_perm()
    n = Mf.nrows
    wb = 0
    for a in range(n):
        wb = max(wb, verify_division_sequence(blocks[(a, f[a])], block_certs[(a, f[a])]))
    S = substitute(Mf, blocks)
    height = [blocks[(a, f[a])].nrows for a in range(n)]
    width = [0] * n
    for a in range(n):
        width[f[a]] = blocks[(a, f[a])].ncols
    roff = [0] + list(np.cumsum(height))
    coff = [0] + list(np.cumsum(width))
    merges = []
    for a in range(n):
        for axis, p in block_certs[(a, f[a])].merges:
            off = roff[a] if axis == "row" else coff[f[a]]
            merges.append((axis, int(off + p)))
    for axis, p in cert_f.merges:
        off = roff if axis == "row" else coff
        merges.append((axis, int(off[p])))
    cert = DivisionSequence(S.shape, tuple(merges), 0)
    w = verify_division_sequence(S, cert)
    return S, LiftResult(DivisionSequence(S.shape, cert.merges, w), w, max(wf, wb))


def tensor_width(factors: Sequence):
    """Sequence for the lexicographic tensor product of bijection matrices.

    ``factors`` is a list of ``(matrix, certificate)``; the first factor is the
    most significant coordinate. Returns ``(product matrix, LiftResult)``.
    """
    if not factors:
        raise ValueError("need at least one factor")
    widths = [verify_division_sequence(M, c) for M, c in factors]
    if len(factors) == 1:
        M, c = factors[0]
        return M, LiftResult(DivisionSequence(M.shape, c.merges, widths[0]), widths[0], widths[0])
    inner, inner_res = tensor_width(factors[1:])
    Mf, cf = factors[0]
    f = Mf.as_perm()
    blocks = {(a, f[a]): inner for a in range(Mf.nrows)}
    certs = {(a, f[a]): inner_res.cert for a in range(Mf.nrows)}
    S, res = substitute_sequences(Mf, cf, blocks, certs)
    assert S == tensor(Mf, inner)
    return S, LiftResult(res.cert, res.width, max(widths))


# -- superposition ----------------------------------------------------------------


def superposition_gn_bound(Ms: Sequence[OrderedMatrix], k: int):
    """Check ``gn(M_1 v ... v M_r) < max(k, r^(rk))`` given every ``gn(M_i) < k``.

    Returns ``(bound, holds, gn_of_superposition)``.
    """
    r = len(Ms)
    if r == 0:
        raise ValueError("need at least one matrix")
    for i, M in enumerate(Ms):
        if contains_k_grid(M, k) is not None:
            raise ValueError(f"matrix {i} has a {k}-grid; precondition gn < k fails")
    bound = max(k, r ** (r * k))
    g = grid_number_matrix(superpose(list(Ms)))
    return bound, g < bound, g


def grid_in_component(Ms: Sequence[OrderedMatrix], witness: GridWitness, k: int):
    """From an l-grid of the superposition (l >= r^(rk)), extract a k-grid of one M_i.

    Zones are colored by the least ``i`` whose matrix is non-zero there; a
    monochromatic k x k choice of zones is then coarsened into a k-grid.
    Returns ``(i, GridWitness)`` with ``i`` 0-based.
    """
    r = len(Ms)
    l = witness.k
    if not check_witness(superpose(list(Ms)), witness):
        raise CertificateInvalid("witness is not a grid of the superposition")
    from .matrix_core import Division

    D = Division(Ms[0].nrows, Ms[0].ncols, witness.row_cuts, witness.col_cuts)
    color = np.zeros((l, l), dtype=int)
    zone_points = {}
    for i, M in reversed(list(enumerate(Ms))):
        for x, y in sorted(M.ones, reverse=True):
            z = (D.row_part(x), D.col_part(y))
            color[z] = i + 1
            zone_points[(i, z)] = (x, y)
    sq = color[: r ** (r * k), : r ** (r * k)] if l >= r ** (r * k) else None
    if sq is None:
        raise ValueError(f"grid of size {l} is below r^(rk)")
    c, rows, cols = monochromatic_grid(sq, r, k)
    i = c - 1
    rows, cols = sorted(rows), sorted(cols)
    rint, cint = D.row_intervals(), D.col_intervals()
    # band t of the new grid starts at the interval of the selected zone row t
    row_cuts = tuple(rint[rows[t]][0] for t in range(1, k))
    col_cuts = tuple(cint[cols[t]][0] for t in range(1, k))
    pts = tuple(tuple(zone_points[(i, (rows[a], cols[b]))] for b in range(k)) for a in range(k))
    w = GridWitness(k, row_cuts, col_cuts, pts)
    assert check_witness(Ms[i], w)
    return i, w


# -- partition-sequence helpers -------------------------------------------------


def restrict_partition_sequence(cert: PartitionSequence, vertices: Sequence[int]) -> PartitionSequence:
    """Sequence on ``vertices`` (relabelled ``0..len-1`` by list position).

    Merges that touch a part with no kept vertex become no-ops and are dropped.
    """
    label = {v: i for i, v in enumerate(vertices)}
    rep = {v: (label[v] if v in label else None) for v in range(cert.n)}
    merges = []
    for a, b in cert.merges:
        keep = min(a, b)
        ra, rb = rep.pop(max(a, b)), rep[keep]
        if ra is not None and rb is not None:
            merges.append((min(ra, rb), max(ra, rb)))
            rep[keep] = min(ra, rb)
        else:
            rep[keep] = ra if rb is None else rb
    return PartitionSequence(len(vertices), tuple(merges), 0)


def lift_through_partition(P: VertexPartition, cert_Q: PartitionSequence) -> PartitionSequence:
    """Merge each part's vertices in index order, then replay ``cert_Q`` on the parts."""
    merges = []
    for part in P.parts:
        for v in part[1:]:
            merges.append((part[0], v))
    grep = {i: P.parts[i][0] for i in range(len(P.parts))}
    for a, b in cert_Q.merges:
        lo, hi = min(a, b), max(a, b)
        glo, ghi = grep[lo], grep.pop(hi)
        merges.append((min(glo, ghi), max(glo, ghi)))
        grep[lo] = min(glo, ghi)
    return PartitionSequence(P.n, tuple(merges), 0)


# -- graph lifts -----------------------------------------------------------------


def quotient_lift(cert_Q: PartitionSequence, G: OrderedGraph, P: VertexPartition, k: Optional[int] = None) -> LiftResult:
    """Sequence for ``G`` from one for ``G/P`` (parts of size <= k), bound ``k * width``."""
    if k is None:
        k = P.max_part_size()
    if P.max_part_size() > k:
        raise ValueError(f"a part has {P.max_part_size()} > {k} vertices")
    Q = quotient_graph(G, P)
    wq = verify_partition_sequence(Q, cert_Q)
    cert = lift_through_partition(P, cert_Q)
    w = verify_partition_sequence(G, cert)
    return LiftResult(PartitionSequence(G.n, cert.merges, w), w, k * wq)


def quotient_lift_guarantee(G: OrderedGraph, P: VertexPartition, wq: int) -> int:
    """What the collapse-then-replay construction always achieves:
    ``max(wq, k * D + k - 1)`` with ``D`` the quotient's maximum degree, since a
    partially collapsed part sees up to k pieces of each neighbouring part and
    up to k - 1 other pieces of its own part."""
    k = P.max_part_size()
    D = quotient_graph(G, P).max_degree()
    return max(wq, k * D + k - 1) if G.n else 0


def power_lift(cert: PartitionSequence, G: OrderedGraph, k: int) -> LiftResult:
    """The same merges, replayed on ``G^(k)``; bound ``width^k``."""
    w = verify_partition_sequence(G, cert)
    Gk = graph_power(G, k)
    wk = verify_partition_sequence(Gk, PartitionSequence(G.n, cert.merges, 0))
    return LiftResult(PartitionSequence(G.n, cert.merges, wk), wk, w ** k)


def regular_embedding_lift(H: OrderedGraph, G: OrderedGraph, f: Sequence[int], lam: int,
                           cert_G: PartitionSequence) -> LiftResult:
    """Sequence for ``H`` from one for ``G`` along a lam-regular map ``f: V(H) -> V(G)``.

    Chain: power of the certificate on ``G^(lam)``, restriction to the image of
    ``f`` (which carries ``H/P`` as a subgraph), then the quotient lift over the
    fibres ``P``. Bound ``lam * width^lam``.
    """
    if len(f) != H.n:
        raise ValueError("map must send every vertex of H")
    if lam < 1:
        raise ValueError("lambda must be at least 1")
    adjG = G.adjacency()
    for x, y in H.edge_set:
        if f[x] != f[y] and f[y] not in _bfs_dist(adjG, f[x], limit=lam):
            raise ValueError(f"not {lam}-Lipschitz: edge ({x}, {y}) maps to distance > {lam}")
    fibres: dict = {}
    for x, v in enumerate(f):
        fibres.setdefault(v, []).append(x)
    big = [v for v, fib in fibres.items() if len(fib) > lam]
    if big:
        raise ValueError(f"fibre over {big[0]} has more than {lam} vertices")
    w = verify_partition_sequence(G, cert_G)
    power = power_lift(cert_G, G, lam)
    P = VertexPartition(H.n, sorted(fibres.values()))
    image = [f[part[0]] for part in P.parts]
    cert_Q = restrict_partition_sequence(power.cert, image)
    lifted = quotient_lift(cert_Q, H, P, lam)
    return LiftResult(lifted.cert, lifted.width, lam * w ** lam)


# -- composition -----------------------------------------------------------------


def joint_matrix(Msigma: OrderedMatrix, Mtau: OrderedMatrix) -> OrderedMatrix:
    """Rows X then Z, columns Y: ``M_sigma`` stacked over the transpose of ``M_tau``."""
    nx_, ny = Msigma.shape
    ny2, nz = Mtau.shape
    if ny != ny2:
        raise ValueError("sigma's codomain must be tau's domain")
    ones = sorted(Msigma.ones) + sorted((nx_ + z, y) for y, z in Mtau.ones)
    return OrderedMatrix(nx_ + nz, ny, ones)


def compose_lift(cert_joint: DivisionSequence, Msigma: OrderedMatrix, Mtau: OrderedMatrix):
    """Sequence for ``M_{tau o sigma}`` by restricting the joint row division to X and Z.

    Column steps and the removal of the X|Z boundary leave the restriction
    unchanged and are dropped. Returns ``(composite, LiftResult)`` with bound
    ``width(cert_joint)^2``.
    """
    from .matrix_core import compose

    J = joint_matrix(Msigma, Mtau)
    wj = verify_division_sequence(J, cert_joint)
    nx_ = Msigma.nrows
    merges = []
    for axis, p in cert_joint.merges:
        if axis != "row" or p == nx_:
            continue
        merges.append(("row", p) if p < nx_ else ("col", p - nx_))
    C = compose(Msigma, Mtau)
    cert = DivisionSequence(C.shape, tuple(merges), 0)
    w = verify_division_sequence(C, cert)
    return C, LiftResult(DivisionSequence(C.shape, cert.merges, w), w, wj ** 2)
