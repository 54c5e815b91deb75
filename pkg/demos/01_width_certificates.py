"""Strict twin-width with certificates.

Walks through exact widths of a few graph and matrix families, shows that
every answer comes with a merge sequence the independent verifier replays,
and what a budget-limited run reports instead of an answer.
"""
from __future__ import annotations

from twinwidth.errors import SolverTimeout
from twinwidth.graph_core import complete_graph, cycle_graph, hypercube_graph, path_graph, star_graph
from twinwidth.grids import grid_number_graph, grid_number_matrix
from twinwidth.matrix_core import OrderedMatrix
from twinwidth.width import (
    SearchBudget, stww_graph_exact, stww_matrix_exact, stww_upper_heuristic, verify_certificate,
)


def show(name, x):
    w, cert = (stww_graph_exact if hasattr(x, "edges") else stww_matrix_exact)(x)
    assert verify_certificate(x, cert) == w
    print(f"  {name:<22} stww = {w}   ({len(cert.merges)} merges, verified)")


print("graphs")
for name, G in [("path P6", path_graph(6)), ("star K1,4", star_graph(4)), ("cycle C7", cycle_graph(7)),
                ("complete K5", complete_graph(5)), ("cube Q3", hypercube_graph(3))]:
    show(name, G)

print("\nmatrices: identity and reverse are the smallest non-trivial width")
for n in (2, 5, 9):
    show(f"I_{n}", OrderedMatrix.identity(n))
    show(f"reverse_{n}", OrderedMatrix.reverse(n))
show("4x4 all ones", OrderedMatrix.all_ones(4, 4))

print("\ngrid numbers")
print("  identity 6x6:", grid_number_matrix(OrderedMatrix.identity(6)))
print("  all-ones 5x5:", grid_number_matrix(OrderedMatrix.all_ones(5, 5)))
gn, order = grid_number_graph(cycle_graph(6))
print(f"  C6 over all orders: {gn} (order {order})")

print("\nbudget-limited search")
M = OrderedMatrix(7, 7, [(0, 0), (0, 2), (1, 0), (1, 1), (2, 2), (2, 4), (3, 0), (3, 2), (3, 5), (4, 3), (4, 4),
                         (5, 1), (5, 3), (5, 5), (6, 1), (6, 4), (6, 5)])
try:
    stww_matrix_exact(M, SearchBudget(nodes=1))
except SolverTimeout as exc:
    print(f"  one node per threshold: {exc.lower_bound} <= stww <= {exc.best_width}, "
          f"partial certificate verifies to {verify_certificate(M, exc.best_certificate)}")
print(f"  with the default budget: stww = {stww_matrix_exact(M)[0]}")
print(f"  greedy upper bound alone: {stww_upper_heuristic(M)[0]}")
