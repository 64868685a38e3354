"""How well the closed-form growth predictions track the exact KL growth n* D(p||rho).

The symmetric-grid formula is accurate on rough paths. The asymmetric-grid
formulas drop or mis-size the terms that come from the risk-neutral offset,
while the general second-order expansion stays close in every regime.
"""
import numpy as np

from vexgame.analysis import predict_log_capital, summarize
from vexgame.game import GridParams, scan_hits
from vexgame.pathgen import PathSpec, generate

k = 4
rows = {(2, 2): [], (2, 3): [], (3, 2): []}
for seed in range(10):
    path = generate(PathSpec(kind="fbm", hurst=0.3, n_points=2**20 + 1, seed=seed))
    for a1, a2 in rows:
        pred = predict_log_capital(summarize(scan_hits(path, GridParams.from_scale(a1, a2, k))), a1, a2, k)
        rows[(a1, a2)].append((pred.kl_growth, pred.regime, pred.expansion))

for (a1, a2), vals in rows.items():
    exact, regime, expansion = np.median(np.array(vals), axis=0)
    print(f"(a1, a2) = ({a1}, {a2}): exact {exact:8.3f}  regime formula {regime:8.3f}  expansion {expansion:8.3f}")
