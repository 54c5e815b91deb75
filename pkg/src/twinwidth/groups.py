"""Finite windows of groups and group actions: Cayley balls, action matrices,
windowed uniform-width estimates and a few concrete order constructions."""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Callable, Hashable, Mapping, Optional, Sequence

from .errors import OracleError, SolverTimeout, StructuralError
from .graph_core import OrderedGraph
from .matrix_core import OrderedMatrix, substitute
from .width import SearchBudget, stww_matrix_exact

Element = Hashable


class GroupOracle:
    """Black-box group. Elements are hashable normal forms chosen per group, so
    equality of elements is equality of the Python values."""

    name = "group"

    @property
    def identity(self) -> Element:
        raise NotImplementedError

    def multiply(self, a: Element, b: Element) -> Element:
        raise NotImplementedError

    def invert(self, a: Element) -> Element:
        raise NotImplementedError

    @property
    def generators(self) -> list:
        raise NotImplementedError

    def order_key(self, a: Element):
        """Sort key of the group's built-in total order."""
        return a

    def elements(self) -> Optional[list]:
        """All elements in the built-in order, or None for infinite groups."""
        return None

    def encode(self, a: Element) -> bytes:
        return json.dumps(a, separators=(",", ":")).encode()

    def symmetric_generators(self, S: Optional[Sequence] = None) -> list:
        """``S`` together with inverses, identity removed, duplicates dropped."""
        S = self.generators if S is None else list(S)
        out = []
        for s in S:
            for t in (s, self.invert(s)):
                if t != self.identity and t not in out:
                    out.append(t)
        return out

    def check_axioms(self, sample: Sequence[Element], trials: int = 200, seed: int = 0) -> None:
        """Spot-check associativity, identity and inverses on random triples."""
        if not sample:
            return
        rng = random.Random(seed)
        e = self.identity
        for _ in range(trials):
            a, b, c = (rng.choice(sample) for _ in range(3))
            if self.multiply(self.multiply(a, b), c) != self.multiply(a, self.multiply(b, c)):
                raise OracleError(f"{self.name}: associativity fails on {a!r}, {b!r}, {c!r}")
            if self.multiply(a, e) != a or self.multiply(e, a) != a:
                raise OracleError(f"{self.name}: identity law fails on {a!r}")
            if self.multiply(a, self.invert(a)) != e:
                raise OracleError(f"{self.name}: inverse law fails on {a!r}")


class IntegerLattice(GroupOracle):
    """Z^d with elements as integer tuples, ordered lexicographically."""

    def __init__(self, d: int = 1):
        if d < 1:
            raise ValueError("dimension must be positive")
        self.d = d
        self.name = "Z" if d == 1 else f"Z^{d}"

    @property
    def identity(self):
        return (0,) * self.d

    def multiply(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def invert(self, a):
        return tuple(-x for x in a)

    @property
    def generators(self):
        return [tuple(int(i == j) for j in range(self.d)) for i in range(self.d)]


class Cyclic(GroupOracle):
    """Z/n with the natural order 0 < 1 < ... < n-1."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("order must be positive")
        self.n = n
        self.name = f"Z/{n}"

    @property
    def identity(self):
        return 0

    def multiply(self, a, b):
        return (a + b) % self.n

    def invert(self, a):
        return (-a) % self.n

    @property
    def generators(self):
        return [1 % self.n]

    def elements(self):
        return list(range(self.n))


class Dihedral(GroupOracle):
    """Symmetries of a regular n-gon, order 2n. ``(r, s)`` stands for rot^r ref^s."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        self.name = f"D{2 * n}"

    @property
    def identity(self):
        return (0, 0)

    def multiply(self, a, b):
        r1, s1 = a
        r2, s2 = b
        return ((r1 + (-r2 if s1 else r2)) % self.n, s1 ^ s2)

    def invert(self, a):
        r, s = a
        return (r, 1) if s else ((-r) % self.n, 0)

    @property
    def generators(self):
        return [(1 % self.n, 0), (0, 1)]

    def order_key(self, a):
        return (a[1], a[0])

    def elements(self):
        return [(r, s) for s in (0, 1) for r in range(self.n)]


class FreeGroup(GroupOracle):
    """Free group on ``rank`` letters. Reduced words are tuples of nonzero ints,
    ``i`` for the i-th generator and ``-i`` for its inverse; shortlex order with
    letters ordered a < a^-1 < b < b^-1 < ..."""

    def __init__(self, rank: int = 2):
        if rank < 1:
            raise ValueError("rank must be positive")
        self.rank = rank
        self.name = f"F{rank}"

    @property
    def identity(self):
        return ()

    def multiply(self, a, b):
        out = list(a)
        for x in b:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
        return tuple(out)

    def invert(self, a):
        return tuple(-x for x in reversed(a))

    @property
    def generators(self):
        return [(i,) for i in range(1, self.rank + 1)]

    def order_key(self, a):
        return (len(a), tuple((abs(x), x < 0) for x in a))


class Heisenberg(GroupOracle):
    """Integer Heisenberg group of 3x3 unitriangular matrices, as triples
    ``(a, b, c)`` with ``(a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')``."""

    name = "Heisenberg"

    @property
    def identity(self):
        return (0, 0, 0)

    def multiply(self, x, y):
        a, b, c = x
        a2, b2, c2 = y
        return (a + a2, b + b2, c + c2 + a * b2)

    def invert(self, x):
        a, b, c = x
        return (-a, -b, -c + a * b)

    @property
    def generators(self):
        return [(1, 0, 0), (0, 1, 0)]


class Lamplighter(GroupOracle):
    """Z/2 wr Z: ``(lamps, p)`` with lamps a sorted tuple of lit positions.
    ``(f,p)(g,q) = (f xor (g+p), p+q)``."""

    name = "Lamplighter"

    @property
    def identity(self):
        return ((), 0)

    def multiply(self, x, y):
        f, p = x
        g, q = y
        return (tuple(sorted(set(f) ^ {v + p for v in g})), p + q)

    def invert(self, x):
        f, p = x
        return (tuple(sorted(v - p for v in f)), -p)

    @property
    def generators(self):
        return [((), 1), ((0,), 0)]

    def order_key(self, x):
        return (x[1], len(x[0]), x[0])


class TreeAutomorphism(GroupOracle):
    """Automorphisms of the complete rooted binary tree of depth ``depth``.

    Nodes are numbered breadth-first (root 0, children of v are 2v+1, 2v+2).
    An element is the tuple ``g`` with ``g[v]`` the image of node v; products
    act on the right, ``x.(gh) = (x.g).h``.
    """

    def __init__(self, depth: int):
        if depth < 0:
            raise ValueError("depth must be non-negative")
        self.depth = depth
        self.nodes = 2 ** (depth + 1) - 1
        self.internal = 2 ** depth - 1
        self.name = f"Aut(T{depth})"

    @property
    def identity(self):
        return tuple(range(self.nodes))

    def multiply(self, g, h):
        return tuple(h[g[x]] for x in range(self.nodes))

    def invert(self, g):
        out = [0] * self.nodes
        for x, y in enumerate(g):
            out[y] = x
        return tuple(out)

    def from_portrait(self, bits: Sequence[int]):
        """Element that swaps the two subtrees below internal node v iff ``bits[v]``."""
        if len(bits) != self.internal:
            raise ValueError(f"portrait needs {self.internal} bits")
        g = [0] * self.nodes
        for v in range(self.internal):
            for c in (0, 1):
                g[2 * v + 1 + c] = 2 * g[v] + 1 + (c ^ int(bool(bits[v])))
        return tuple(g)

    def portrait(self, g) -> tuple:
        return tuple(int(g[2 * v + 1] == 2 * g[v] + 2) for v in range(self.internal))

    @property
    def generators(self):
        return [self.from_portrait([int(u == v) for u in range(self.internal)]) for v in range(self.internal)]

    def elements(self):
        out = []
        for code in range(2 ** self.internal):
            out.append(self.from_portrait([(code >> v) & 1 for v in range(self.internal)]))
        return sorted(out)

    def leaves(self) -> list:
        return list(range(self.internal, self.nodes))

    @staticmethod
    def act(x: int, g) -> int:
        return g[x]


# -- ordered windows -------------------------------------------------------------


class OrderedGroundSet:
    """A finite window ``X`` of a totally ordered set; position = rank."""

    def __init__(self, elements: Sequence[Element]):
        self.elements = list(elements)
        self._rank = {x: i for i, x in enumerate(self.elements)}
        if len(self._rank) != len(self.elements):
            raise StructuralError("ground set elements must be distinct")

    @classmethod
    def sorted_by(cls, elements, key: Callable) -> "OrderedGroundSet":
        return cls(sorted(elements, key=key))

    @classmethod
    def from_group(cls, G: GroupOracle, elements) -> "OrderedGroundSet":
        """Window ordered by the group's built-in order."""
        return cls.sorted_by(elements, G.order_key)

    def rank(self, x: Element) -> Optional[int]:
        return self._rank.get(x)

    def __contains__(self, x) -> bool:
        return x in self._rank

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def right_product(G: GroupOracle) -> Callable:
    return G.multiply


def action_matrix(X: OrderedGroundSet, act: Callable, g, with_lost: bool = False):
    """Window of the matrix of ``g``: a 1 at ``(x, x.g)`` whenever both lie in X.

    With ``with_lost`` also return how many x in X were sent outside X.
    """
    ones = []
    lost = 0
    for i, x in enumerate(X.elements):
        j = X.rank(act(x, g))
        if j is None:
            lost += 1
        else:
            ones.append((i, j))
    M = OrderedMatrix(len(X), len(X), ones)
    return (M, lost) if with_lost else M


def cayley_ball(G: GroupOracle, S: Optional[Sequence] = None, r: int = 1):
    """Ball of radius ``r`` around the identity in Cay(G, S).

    Returns ``(graph, elements)``; vertex i is ``elements[i]``, numbered in
    breadth-first discovery order. x and y are adjacent iff y = xs with s in
    S or S^-1.
    """
    if r < 0:
        raise ValueError("radius must be non-negative")
    T = G.symmetric_generators(S)
    elems = [G.identity]
    index = {G.identity: 0}
    frontier = [G.identity]
    for _ in range(r):
        nxt = []
        for x in frontier:
            for s in T:
                y = G.multiply(x, s)
                if y not in index:
                    index[y] = len(elems)
                    elems.append(y)
                    nxt.append(y)
        frontier = nxt
    G.check_axioms(elems + T)
    edges = set()
    for i, x in enumerate(elems):
        for s in T:
            j = index.get(G.multiply(x, s))
            if j is not None and j != i:
                edges.add((min(i, j), max(i, j)))
    return OrderedGraph(len(elems), sorted(edges)), elems


def ball_elements(G: GroupOracle, L: int, S: Optional[Sequence] = None) -> list:
    """Elements of word length at most L, in breadth-first order."""
    return cayley_ball(G, S, L)[1]


@dataclass
class UniformWidthEstimate:
    """Maximum action-matrix width over a finite set of elements on a finite window.

    This is only a lower bound for the uniform width of the order; ``label``
    says so in every serialised result.
    """

    value: int
    per_element: list
    lost_fraction: float
    warning: Optional[str] = None
    undecided: list = field(default_factory=list)
    label: str = field(default="estimate (lower bound)")

    def to_json(self) -> str:
        return json.dumps({"label": self.label, "value": self.value,
                           "lost_fraction": self.lost_fraction, "warning": self.warning,
                           "per_element": [[repr(g), w] for g, w in self.per_element],
                           "undecided": [[repr(g), lo, hi] for g, lo, hi in self.undecided]}) + "\n"


def _trim(M: OrderedMatrix) -> OrderedMatrix:
    rows = sorted({i for i, _ in M.ones})
    cols = sorted({j for _, j in M.ones})
    return M.submatrix(rows, cols)


def uniform_width_estimate(G: GroupOracle, X: OrderedGroundSet, L: int,
                           act: Optional[Callable] = None, S: Optional[Sequence] = None,
                           budget: Optional[SearchBudget] = None,
                           lost_warning: float = 0.5) -> UniformWidthEstimate:
    """Max of stww over the action matrices of all elements of word length <= L.

    Empty rows and columns (points pushed out of the window) are dropped before
    solving; the fraction of such points is reported. When the solver runs out
    of budget the proven lower bound is used and the element is listed as
    undecided together with its certified upper bound.
    """
    act = act or G.multiply
    per = []
    undecided = []
    lost_total = 0
    elems = ball_elements(G, L, S)
    for g in elems:
        M, lost = action_matrix(X, act, g, with_lost=True)
        lost_total += lost
        try:
            w, _ = stww_matrix_exact(_trim(M), budget)
        except SolverTimeout as exc:
            w = exc.lower_bound
            undecided.append((g, exc.lower_bound, exc.best_width))
        per.append((g, w))
    frac = lost_total / (len(X) * len(elems)) if len(X) and elems else 0.0
    notes = []
    if frac > lost_warning:
        notes.append(f"window too small: {frac:.0%} of points leave the window; enlarge it")
    if undecided:
        notes.append(f"{len(undecided)} element(s) undecided within budget; lower bounds used")
    return UniformWidthEstimate(max((w for _, w in per), default=0), per, frac,
                                "; ".join(notes) or None, undecided)


def is_right_invariant(G: GroupOracle, X: OrderedGroundSet, Z: Optional[Sequence] = None) -> bool:
    """Whether x < y implies xz < yz for all x, y in X and z in Z whenever xz, yz
    stay in X (Z defaults to the generators and their inverses)."""
    Z = G.symmetric_generators() if Z is None else list(Z)
    for z in Z:
        images = [X.rank(G.multiply(x, z)) for x in X.elements]
        kept = [r for r in images if r is not None]
        if any(a >= b for a, b in zip(kept, kept[1:])):
            return False
    return True


# -- extension orders ------------------------------------------------------------


def _coset_index(G: GroupOracle, Hset: set, T: Sequence, x) -> int:
    hits = [i for i, t in enumerate(T) if G.multiply(x, G.invert(t)) in Hset]
    if len(hits) != 1:
        raise ValueError(f"{x!r} lies in {len(hits)} cosets of the transversal")
    return hits[0]


def extension_order(G: GroupOracle, H: Sequence, order_H: Sequence, order_cosets: Sequence,
                    T: Sequence) -> OrderedGroundSet:
    """Order on a finite group from orders on H and on the right cosets Hg.

    ``order_cosets`` lists one element per coset (any representative), in the
    desired coset order; ``T`` is the transversal. Cosets come in that order and
    inside the coset of t, x precedes y iff x t^-1 precedes y t^-1 in ``order_H``.
    """
    elems = G.elements()
    if elems is None:
        raise ValueError("extension_order needs a finite group")
    Hset = set(H)
    if set(order_H) != Hset or len(order_H) != len(Hset):
        raise ValueError("order_H must list every element of H once")
    T = list(T)
    seen = [0] * len(T)
    for x in elems:
        seen[_coset_index(G, Hset, T, x)] += 1
    if any(c != len(Hset) for c in seen):
        raise ValueError("T is not a transversal of the right cosets of H")
    ranks = [_coset_index(G, Hset, T, c) for c in order_cosets]
    if sorted(ranks) != list(range(len(T))):
        raise ValueError("order_cosets must name each coset exactly once")
    return OrderedGroundSet([G.multiply(h, T[i]) for i in ranks for h in order_H])


def coset_action_matrix(G: GroupOracle, H: Sequence, cosets: Sequence, a) -> OrderedMatrix:
    """Matrix of ``a`` acting on right cosets Hc (listed by representatives, in order)."""
    Hset = set(H)
    ones = [(i, _coset_index(G, Hset, cosets, G.multiply(c, a))) for i, c in enumerate(cosets)]
    return OrderedMatrix(len(cosets), len(cosets), ones)


def extension_blocks(G: GroupOracle, H: Sequence, order_H: Sequence, cosets: Sequence, a) -> dict:
    """Blocks of the coset decomposition: for a sending Ht1 to Ht2, the matrix of
    r = t1 a t2^-1 acting on H (with ``order_H``), keyed by coset positions."""
    Hset = set(H)
    XH = OrderedGroundSet(order_H)
    out = {}
    for i, t1 in enumerate(cosets):
        j = _coset_index(G, Hset, cosets, G.multiply(t1, a))
        r = G.multiply(G.multiply(t1, a), G.invert(cosets[j]))
        out[(i, j)] = action_matrix(XH, G.multiply, r)
    return out


def extension_decomposition(G: GroupOracle, H: Sequence, order_H: Sequence, cosets: Sequence, a) -> OrderedMatrix:
    """Substitute the H-blocks into the coset matrix of ``a``."""
    return substitute(coset_action_matrix(G, H, cosets, a), extension_blocks(G, H, order_H, cosets, a))


# -- separable permutations -------------------------------------------------------


_BLOCKS = {"diag": OrderedMatrix.identity(2), "antidiag": OrderedMatrix.reverse(2)}


def separable_perm(d: int, choices: Mapping) -> OrderedMatrix:
    """Leaf permutation matrix of a depth-d tree automorphism.

    ``choices[v]`` for each internal node v (breadth-first index) is ``"diag"``
    or ``"antidiag"``; level by level every 1 at (a, f(a)) is replaced by the
    chosen 2x2 block of node a.
    """
    if d < 0:
        raise ValueError("depth must be non-negative")
    M = OrderedMatrix.identity(1)
    for level in range(d):
        base = 2 ** level - 1
        blocks = {}
        for a, fa in enumerate(M.as_perm()):
            c = choices[base + a]
            if c not in _BLOCKS:
                raise ValueError(f"choice must be 'diag' or 'antidiag', got {c!r}")
            blocks[(a, fa)] = _BLOCKS[c]
        M = substitute(M, blocks)
    return M


def random_choices(d: int, rng: random.Random) -> dict:
    return {v: rng.choice(("diag", "antidiag")) for v in range(2 ** d - 1)}


BUILTIN_GROUPS = {
    "Z": lambda: IntegerLattice(1),
    "Z2": lambda: IntegerLattice(2),
    "Z3": lambda: IntegerLattice(3),
    "F2": lambda: FreeGroup(2),
    "D8": lambda: Dihedral(4),
    "Z12": lambda: Cyclic(12),
    "Z6": lambda: Cyclic(6),
    "heisenberg": Heisenberg,
    "lamplighter": Lamplighter,
    "aut3": lambda: TreeAutomorphism(3),
}


def builtin_group(name: str) -> GroupOracle:
    if name in BUILTIN_GROUPS:
        return BUILTIN_GROUPS[name]()
    if name.startswith("Z/"):
        return Cyclic(int(name[2:]))
    if name.startswith("Z^"):
        return IntegerLattice(int(name[2:]))
    if name.startswith("D") and name[1:].isdigit():
        n2 = int(name[1:])
        if n2 % 2:
            raise ValueError("dihedral group order must be even")
        return Dihedral(n2 // 2)
    raise ValueError(f"unknown group {name!r}; known: {sorted(BUILTIN_GROUPS)}, Z/n, Z^d, D2n")
