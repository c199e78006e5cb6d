"""Digit-by-digit vectors against the naive greedy search on the exact error.

The naive search minimises the error itself for one alpha at a time and
costs O(d 4^m); the digit-by-digit vector is built once for all alpha.
"""

from cbcdbd.cli import run_compare

rows = run_compare(range(4, 11), 20, [1.5, 2.0], "poly:2", True, "power")
print(f"{'m':>3} {'alpha':>5} {'digit-by-digit':>15} {'naive CBC':>12} {'ratio':>6}")
for m, n, alpha, dbd, cbc in rows:
    print(f"{m:3d} {alpha:5.1f} {dbd:15.4e} {cbc:12.4e} {dbd / cbc:6.2f}")
