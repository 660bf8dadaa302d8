"""
Counting self-avoiding walks on the honeycomb lattice
======================================================

"""
import math
import time

import numpy as np

from parafermion import sawlattice

t0 = time.perf_counter()
s = sawlattice.enumerate_saws("honeycomb", 25)
print(f"enumerated to length 25 in {time.perf_counter() - t0:.2f} s")
print("c_N:", list(s.counts))

# successive ratios creep up towards mu with a 1/N correction
c = np.array(s.counts, dtype=float)
ratios = c[1:] / c[:-1]
print("last ratios:", np.round(ratios[-5:], 5))

mu = math.sqrt(2 + math.sqrt(2))
for method in ("raw_ratio", "linear_extrapolation"):
    est = sawlattice.connective_constant_estimate(s, method)
    print(f"{method:22s} {est:.6f}  (rel. error {abs(est - mu) / mu:.1e})")
