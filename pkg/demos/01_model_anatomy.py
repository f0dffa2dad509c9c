"""
Anatomy of the composite model
==============================

An exponentially growing sinusoid on a regime clock, riding on a linear
drift that counts years from 1920.
"""

import numpy as np

from growthdecay import CompositeParams, eval_composite, eval_logistic, LogisticParams

# Income regime 2: A = 0.11e6 BEF, alpha = 0.059, full period 56 years.
p = CompositeParams.from_full_period(0.11e6, 0.059, 56, 0.615e4)
print("semi-period T =", p.T)

# The oscillation restarts at each regime start while the drift keeps
# counting from 1920, so the two clocks differ by 21 years here.
years = np.arange(1941, 1966, 4)
values = eval_composite(p, years - 1941, years - 1920)
for year, value in zip(years, values):
    print(f"{year}  {value:14.1f}")

# At the start of a regime only the drift survives.
print("1941:", eval_composite(p, 0, 21), "=", 21 * p.b)

# The logistic law saturates at y_max and is symmetric about its midpoint.
law = LogisticParams(y_max=1e6, rate=0.1, t_mid=1960)
for d in (0, 10, 30):
    lo, hi = eval_logistic(law, 1960 - d), eval_logistic(law, 1960 + d)
    print(f"d={d:2d}  y(mid-d)+y(mid+d) = {lo + hi:.3f}")
