"""Queue layouts of graphs and increasing decompositions of matrices.

Checks a two-queue layout of the cube, refines it into strict queues, and
tabulates strict twin-width against strict queue number for all permutation
matrices of size 5.
"""
from __future__ import annotations

from collections import Counter
from itertools import permutations

from twinwidth.graph_core import hypercube_graph, star_graph
from twinwidth.matrix_core import OrderedMatrix
from twinwidth.queues import QueueLayout, increasing_decomposition, qn_exact, refine_to_strict, sqn_exact, verify_layout
from twinwidth.width import stww_matrix_exact

Q3 = hypercube_graph(3)
L = QueueLayout(tuple(range(8)),
                (((0, 1), (0, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 7), (6, 7)),
                 ((0, 4), (1, 5), (2, 6), (3, 7))))
print("cube, binary order:", verify_layout(Q3, L), "queues")
S = refine_to_strict(Q3, L)
print("refined to", verify_layout(Q3, S), "strict queues (at most (max degree + 1) * 2 =", (3 + 1) * 2, ")")
print("exact over all orders: qn =", qn_exact(Q3)[0], " sqn =", sqn_exact(Q3)[0])
print("star K1,3: sqn =", sqn_exact(star_graph(3))[0])

pairs = Counter()
for p in permutations(range(5)):
    M = OrderedMatrix.from_perm(p)
    pairs[(stww_matrix_exact(M)[0], increasing_decomposition(M)[0])] += 1
print("\n(stww, sqn) over the 120 permutations of size 5:")
for key in sorted(pairs):
    print(f"  {key}: {pairs[key]}")
