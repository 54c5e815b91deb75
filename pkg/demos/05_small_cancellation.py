"""Labelling graphs for small cancellation, then solving the word problem.

Two cycles get random letters until no long piece is shared. The relators
read along the cycles are then decided trivial by Dehn's algorithm, while a
random word usually is not.
"""
from __future__ import annotations

import random
from fractions import Fraction

from twinwidth.construction import construct
from twinwidth.graph_core import cycle_graph
from twinwidth.small_cancellation import (
    RelatorOracle, check_small_cancellation, dehn_decide, extract_relators, format_word, invert_word,
    label_search,
)

lam = Fraction(1, 6)
res = label_search([cycle_graph(7), cycle_graph(9)], 4, lam, seed=1)
F = res.family
print("labelled cycles:", [format_word(tuple(G.labels)) for G in F.graphs], "resamples", res.resamples)
print("checker:", check_small_cancellation(F, lam).ok)

oracle = RelatorOracle(F, lam)
r = min(extract_relators(F, 7))
x = (("a", 1), ("b", -1))
w = x + r + invert_word(x)
d = dehn_decide(w, oracle)
print(f"\nconjugated relator {format_word(w)}: {d.verdict} in {len(d.steps)} steps")
rng = random.Random(3)
letters = [(s, e) for s in F.alphabet for e in (1, -1)]
for _ in range(3):
    w = tuple(rng.choice(letters) for _ in range(8))
    print(f"random word {format_word(w)}: {dehn_decide(w, oracle).verdict}")

print("\nconstruction outputs need a large alphabet: n=16 and n=32 graphs with 20 letters, lambda 1/2")
gs = [construct(16, 0).graph, construct(32, 0).graph]
for seed in range(3):
    out = label_search(gs, 20, Fraction(1, 2), seed=seed, retries=500)
    print(f"  seed {seed}: {'labelled' if out.ok else out.message}")
