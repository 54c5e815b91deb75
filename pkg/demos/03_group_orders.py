"""Cayley balls, action matrices and orders of finite windows.

For several groups the ball adjacency matrix is rebuilt from the generator
action matrices, then the largest width of an action matrix on a window is
estimated. These are finite-window lower-bound estimates, not group invariants.
"""
from __future__ import annotations

import random

from twinwidth.groups import (
    OrderedGroundSet, action_matrix, ball_elements, builtin_group, cayley_ball, random_choices,
    separable_perm, uniform_width_estimate,
)
from twinwidth.matrix_core import adjacency_matrix, superpose
from twinwidth.width import stww_matrix_exact

for name, r in [("Z2", 3), ("F2", 2), ("D8", 4), ("Z12", 6), ("heisenberg", 1), ("lamplighter", 2)]:
    G = builtin_group(name)
    g, elems = cayley_ball(G, None, r)
    X = OrderedGroundSet.from_group(G, elems)
    A = adjacency_matrix(g, [elems.index(x) for x in X.elements])
    B = superpose([action_matrix(X, G.multiply, s) for s in G.symmetric_generators()])
    est = uniform_width_estimate(G, X, 1)
    print(f"{name:<12} radius {r}: {g.n:>3} elements, adjacency = superposition: {A == B}, "
          f"window estimate {est.value} (lost fraction {est.lost_fraction:.2f})")

print("\nseparable permutations from tree automorphisms")
rng = random.Random(0)
for d in range(1, 6):
    widths = {stww_matrix_exact(separable_perm(d, random_choices(d, rng)))[0] for _ in range(20)}
    print(f"  depth {d}: 20 random automorphisms, widths {sorted(widths)}")

Z = builtin_group("Z")
X = OrderedGroundSet.from_group(Z, ball_elements(Z, 6))
print("\nZ window of size", len(X), "translation widths:",
      [stww_matrix_exact(action_matrix(X, Z.multiply, (t,)))[0] for t in range(-5, 6)])
