"""p-variation, the variation exponent and the path-event checks.

Dyadic p-sums of a Brownian path stay put for p = 2 (quadratic variation) and
blow up under refinement for p < 2; a smooth path has finite 1-variation.
"""
import numpy as np

from vexgame.analysis import (
    dyadic_sums,
    holder_ratio_max,
    in_event_lower,
    in_event_range,
    in_event_upper,
    p_variation,
    vex_estimate,
)
from vexgame.pathgen import PathSpec, generate

bm = generate(PathSpec(kind="fbm", hurst=0.5, n_points=2**16 + 1, seed=5))
for p in (1.5, 2.0, 2.5):
    sums = dyadic_sums(bm.log_prices, p)
    print(f"p={p}: dyadic sums at levels 10..16:", np.round(sums[10:], 3).tolist())
print(f"variation exponent {vex_estimate(bm).vex:.3f}")

sine = generate(PathSpec(kind="sinusoid", amplitude=0.2, frequency=2, n_points=2**14 + 1))
print(f"sinusoid 1-variation {p_variation(sine.log_prices, 1.0):.4f} (exact 1.6), vex {vex_estimate(sine).vex:.3f}")

rough = generate(PathSpec(kind="fbm", hurst=0.3, n_points=2**12 + 1, seed=6))
c = holder_ratio_max(rough, 0.3)
print(f"H=0.3 path: max Holder ratio at 0.3 is {c:.3f}")
print("  upper event at (0.3, C):", in_event_upper(rough, 0.3, c), " at (0.5, C):", in_event_upper(rough, 0.5, c))
print("  lower event at (0.4, 0.05):", in_event_lower(rough, 0.4, 0.05))
print("  range within 1:", in_event_range(rough, 1.0))
