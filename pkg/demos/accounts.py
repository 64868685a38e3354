"""Account constructions: the two-account split, static mixtures and the dyadic ladder.

The split puts half the capital in a game started at the first A/2 exit, so
a path that leaves the band and comes back still shows a move of at least
A/4 to one of the accounts. The ladder stakes 2**-i on scale k_min+i-1 and
banks 1 as soon as that account reaches 2**i.
"""
import numpy as np

from vexgame.forcing import CapitalCurve, MultiScaleConfig, dyadic_ladder, mix, play_scale, two_account
from vexgame.pathgen import PathSpec, PricePath, generate

a = 1.0
t = np.linspace(0, 1, 401)
logs = np.where(t <= 0.5, 1.4 * t, 1.4 * (1 - t))  # up to 0.7 and back to 0
trip = PricePath.from_log_prices(t, logs)
res = two_account(trip, MultiScaleConfig(range_threshold=a, k_min=3, k_max=5))
print(f"round trip: t_A = {res.t_a:.3f}, move from start {res.log_move_first:+.3f}, from t_A {res.log_move_second:+.3f}")
print("guarantee max|L| >= A/4:", res.anchor_guarantee(a))
for k, lk1, lk2, total in res.log_capitals():
    print(f"  k={k}: log K first {lk1:+.3f}, second {lk2:+.3f}, combined {total:+.3f}")

path = generate(PathSpec(kind="fbm", hurst=0.3, n_points=2**20 + 1, seed=0))
cfg = MultiScaleConfig(k_min=3, n_accounts=5)
curves = [CapitalCurve.of(play_scale(path, cfg, k, sample_times=path.times[::1024]).trajectory) for k in (3, 5)]
m = mix(curves, [0.25, 0.75])
print(f"mixture at T: {m.capital[-1]:.3f} = 0.25*{curves[0].capital[-1]:.3f} + 0.75*{curves[1].capital[-1]:.3f}")

ladder = dyadic_ladder(path, cfg)
print(f"ladder scales {ladder.ks}: {ladder.n_frozen} accounts banked, freeze times {ladder.freeze_times}")
print(f"ledger total: start {ladder.total[0]:.4f}, end {ladder.total[-1]:.4f}")
