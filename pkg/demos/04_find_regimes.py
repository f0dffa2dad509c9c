"""
Finding regime boundaries
=========================

An exhaustive scan over every pair of breakpoints, each interval fitted
once and memoized. On noiseless income data the published boundaries come
back exactly.
"""

import time

from growthdecay.segment import boundary_search, progression_check
from growthdecay.synth import generate_paper_income

data = generate_paper_income()
t0 = time.perf_counter()
found = boundary_search(data, n_regimes=3, min_width=10)
print(f"{found.n_candidates} placements scanned in {time.perf_counter() - t0:.1f} s")
for r, fit in zip(found.partition, found.fits):
    p = fit.params
    print(f"regime {r.index}: [{r.start_year};{r.end_year}]  2T = {p.full_period:.1f}")

# Regime widths of the visual reading grow as 10 + 9i; the table boundaries do not.
for row in progression_check(found.partition).rows:
    print(f"regime {row.index}: width {row.actual}, progression predicts {row.expected}")
