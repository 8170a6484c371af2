#!/usr/bin/env python3
"""March the quartic profile ODE in c from a fixed seed jet.

The scan seeds (h, h', h'', h''') from a catalog profile at x0 and
integrates the quartic ODE left and right for each c, stopping at
blowups or at the |h| floor rather than stepping across singular loci.
Equivalent to `ewh scan-c`.
"""

from ewhorizon.report import scan_c, scan_rows_csv

print("seed: tanh profile shifted to b = 6 (zero outside the span)")
rows = scan_c(-1.0, -1.0, 1, seed="tanh", seed_params={"b": 6.0})
print(scan_rows_csv(rows))

print("seed: tanh profile at the origin (h crosses zero at x = 0)")
rows = scan_c(-1.0, -1.0, 1, seed="tanh", seed_params={})
print(scan_rows_csv(rows))

print("seed: quadratic profile, c marched over [-1, 2]")
rows = scan_c(-1.0, 2.0, 7, seed="quadratic", seed_params={})
print(scan_rows_csv(rows))
