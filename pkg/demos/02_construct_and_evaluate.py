"""Construct a generating vector digit by digit and evaluate its worst-case error.

The construction never looks at the smoothness parameter; one vector is
evaluated at several values of alpha with weights gamma_j ** alpha.
"""

import time

from cbcdbd import construct_fast, wce_product

d = 100
gamma = [j**-2.0 for j in range(1, d + 1)]

print(f"{'m':>3} {'N':>7} {'alpha=1.5':>12} {'alpha=2':>12} {'alpha=3':>12} {'build s':>8}")
for m in range(6, 17, 2):
    t0 = time.perf_counter()
    gv = construct_fast(m, d, gamma)
    dt = time.perf_counter() - t0
    errs = [wce_product(gv.rule(), a, [g**a for g in gamma]) for a in (1.5, 2.0, 3.0)]
    print(f"{m:3d} {2**m:7d} " + " ".join(f"{e:12.4e}" for e in errs) + f" {dt:8.3f}")
