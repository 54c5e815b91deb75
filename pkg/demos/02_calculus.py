"""Building certificates for derived objects from certificates of their parts.

Substitution and tensor products keep the width; quotients, powers and
compositions come with multiplicative bounds. The quotient bound is checked
on K4 collapsed onto K2, where it does not hold.
"""
from __future__ import annotations

from twinwidth.calculus import (
    compose_lift, joint_matrix, power_lift, quotient_lift, quotient_lift_guarantee, tensor_width,
)
from twinwidth.graph_core import VertexPartition, complete_graph, cycle_graph, quotient_graph
from twinwidth.matrix_core import OrderedMatrix
from twinwidth.width import stww_graph_exact, stww_matrix_exact

R2, R3, P = OrderedMatrix.reverse(2), OrderedMatrix.reverse(3), OrderedMatrix.from_perm([1, 3, 0, 2])
M, res = tensor_width([(m, stww_matrix_exact(m)[1]) for m in (P, R2, R3)])
print(f"tensor of three permutations: {M.nrows}x{M.ncols}, certificate width {res.width}, "
      f"bound {res.bound}, exact {stww_matrix_exact(M)[0]}")

C8 = cycle_graph(8)
w, c = stww_graph_exact(C8)
for k in (1, 2, 3):
    r = power_lift(c, C8, k)
    print(f"C8 power {k}: lifted width {r.width} <= {w}^{k} = {r.bound}")

s, t = OrderedMatrix.from_perm([2, 0, 3, 1]), OrderedMatrix.from_perm([3, 1, 0, 2])
wj, cj = stww_matrix_exact(joint_matrix(s, t))
C, r = compose_lift(cj, s, t)
print(f"composition: joint width {wj}, composite certificate {r.width} <= {r.bound}")

K4 = complete_graph(4)
parts = VertexPartition(4, [[0, 1], [2, 3]])
wq, cq = stww_graph_exact(quotient_graph(K4, parts))
r = quotient_lift(cq, K4, parts)
print(f"\nK4 over K2 (parts of size 2): quotient width {wq}, k * width = {r.bound}, "
      f"but stww(K4) = {stww_graph_exact(K4)[0]}")
print(f"the construction always meets max(wq, k*D + k - 1) = {quotient_lift_guarantee(K4, parts, wq)}")
