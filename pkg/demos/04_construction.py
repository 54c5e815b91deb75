"""Random graphs of bounded degree, large girth and logarithmic diameter.

Samples three perfect matchings on 4096 vertices, removes short cycles,
joins far-apart vertices by a tree, and prints the certificate. Then builds a
two-graph schedule whose girth grows by at least 6.
"""
from __future__ import annotations

import math
import time

from twinwidth.construction import construct, generate_sequence, sample_c1, short_cycles

n = 4096
t = time.perf_counter()
res = construct(n, seed=7)
print(res.certificate.to_text())
print("edit statistics:", res.stats(), f"({time.perf_counter() - t:.2f}s)")

g = math.log2(n) / 4
counts = [len(short_cycles(sample_c1(n, s).graph(), g)) for s in range(20)]
print(f"\ncycles of length <= {g:g} in 20 samples: {counts} (mean {sum(counts) / 20:.2f}, bound {2 * 6 ** g:.0f})")

seq = generate_sequence([16, 4096], seed=0, raise_girth=True)
print("\nschedule [16, 4096] with the raised hitting length:")
for r in seq.graphs:
    c = r.certificate
    print(f"  n={c.n}: girth {c.girth}, diameter {c.diameter}, max degree {c.max_degree}, passed {c.passed}")
print(f"  realised max diameter/girth: {seq.ratio:.2f}, attempts {seq.attempts}")
