"""Multi-scale capital on rough, Brownian and smooth paths.

At scale k the corridor is 2**-k in log-price. On rough paths (H < 1/2) the
round count explodes and the bettor profits from the risk-neutral edge; on
smooth trending paths (H > 1/2) the outcomes are lopsided. Brownian paths
give no systematic growth. A few seeds only; the acceptance suite runs 100.

On a fixed grid the rough-path growth stalls once 2**-k nears the typical
grid increment: below that the piecewise-linear path is smooth. Here that
happens after k = 5 at 2**20 points.
"""
import numpy as np

from vexgame.forcing import MultiScaleConfig, run_multiscale
from vexgame.pathgen import PathSpec, generate

cfg = MultiScaleConfig(k_min=3, k_max=7)
for hurst in (0.3, 0.5, 0.7):
    table = []
    for seed in range(5):
        path = generate(PathSpec(kind="fbm", hurst=hurst, n_points=2**20 + 1, seed=seed))
        table.append([r.log_capital for r in run_multiscale(path, cfg)])
    med = np.median(np.array(table), axis=0)
    print(f"H={hurst}: median log K_k for k=3..7:", np.round(med, 2).tolist())
