"""
Several equivalent solutions
============================

With 10% multiplicative scatter and the phase and offset left free, a
short regime admits distinct parameter sets whose SSE lies within 5% of
the best. The solver reports all of them instead of a single answer.
"""

from growthdecay import CompositeModel, FitConfig, multi_start_fit
from growthdecay.optimize import distinct_solutions
from growthdecay.synth import NoiseSpec, generate_paper_expenses

data = generate_paper_expenses("T", NoiseSpec.lognormal(0.1, 0)).window(1920, 1939)
model = CompositeModel(1920, fixed={})
best, candidates = multi_start_fit(model, data, FitConfig(n_starts=64, rng_seed=0))

print(f"{sum(c.equivalent for c in candidates)} of {len(candidates)} starts land within 5% of the best SSE")
for c in distinct_solutions(candidates):
    p = c.params
    print(f"alpha {p.alpha:.3f}  2T {p.full_period:5.1f}  phi {p.phi:+.2f}  SSE/best {c.sse / best.sse:.3f}")

# Freezing phase and offset at zero (the default) collapses these basins.
frozen_best, frozen = multi_start_fit(CompositeModel(1920), data, FitConfig(n_starts=64, rng_seed=0))
print("with phi = B = 0:", len(distinct_solutions(frozen)), "distinct minimum")
