"""Build a small polynomial lattice rule and look at its points.

Every one-dimensional projection is the full grid {0, 1/N, ..., (N-1)/N};
the quality of the rule lives in how the coordinates are paired up.
"""

import numpy as np

from cbcdbd import PolyLatticeRule, generate_points

rule = PolyLatticeRule.from_indices(2, 4, [1, 7, 13])
pts = generate_points(rule)

print(f"N = {pts.n_points} points in d = {pts.dim} dimensions")
for n, row in enumerate(pts.numerators[:6]):
    print(n, "  ".join(f"{u:2d}/16" for u in row))

for j in range(1, rule.d + 1):
    assert np.array_equal(np.sort(pts.column(j)), np.arange(16))
print("each coordinate visits every multiple of 1/16 once")
