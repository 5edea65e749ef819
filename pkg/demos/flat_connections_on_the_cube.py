"""
Flat unitary connections on the cube
====================================

With phi^i = 1 + alpha^i the curvature is a product of edge values around
each face. We scan a grid of edge values, keep the flat connections and sort
them into families by the zero pattern of lambda_i = |phi^i|.
"""

import math
import time

import numpy as np

from quasigauge import moduli as md

# the two chiral copies of the third family on the cube
for kind in ("cube-case-iii", "cube-case-iii-mirror"):
    c = md.canonical_flat(kind, (1.0, 2.0, 3.0))
    print(kind, "residual", md.flatness_residual(c), "->", md.classify_flat(c).describe())

# lambda is gauge invariant
rng = np.random.default_rng(7)
c = md.canonical_flat("cube-case-iii", (1.0, 2.0, 3.0))
moved = md.gauge_transform(c, md.random_unitary_gauge(rng, 3))
print("phases after a random gauge:", np.round(np.angle(moved.edges()[0]), 3))
print("lambda drift:", np.max(np.abs(md.gauge_invariants(moved) - md.gauge_invariants(c))))

for n, amps, phases in ((2, [0, 1, 2], [0, math.pi / 2, math.pi, 3 * math.pi / 2]), (3, [0, 1], [0, math.pi])):
    t = time.perf_counter()
    res = md.search_flat(n, amps, phases)
    print(f"n={n}: {res.scanned} scanned, {len(res)} flat, {res.counts()}, "
          f"{len(res.unclassified)} unclassified, {time.perf_counter() - t:.2f} s")
