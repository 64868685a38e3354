"""Play one limit-order game on a Brownian path.

The scanner finds the times the price first moves up by 1+delta1 or down by
1/(1+delta2); each exit is a coin toss. Betting on the tosses in the
embedded game and trading the underlying in continuous time give the same
capital at every trade.
"""
import numpy as np

from vexgame.analysis import summarize
from vexgame.game import GridParams, continuous_capital, run_embedded_game, scan_hits
from vexgame.pathgen import PathSpec, generate
from vexgame.strategy import BetaBinomialParams, beta_binomial_bets

path = generate(PathSpec(kind="fbm", hurst=0.5, n_points=2**14 + 1, seed=3))
grid = GridParams.from_deltas(0.05, 0.03)
hits = scan_hits(path, grid)
print(f"rho = {grid.rho:.4f}, rounds = {hits.n_star}, heads = {hits.heads}, tails = {hits.tails}")
for i, t, x, lp in list(hits.rows())[:6]:
    print(f"  round {i:2d} at t={t:.4f}: outcome {x}, log-price {lp:+.4f}")

s = summarize(hits)
print(f"TV = {s.total_variation:.3f}, L = {s.net_move:+.3f}, sigma = {s.sigma:+.3f}, p = {s.p:.3f}")

bets = beta_binomial_bets(hits.outcomes, BetaBinomialParams(), grid.rho)
discrete = run_embedded_game(hits, bets[:-1], grid.rho)
cont = continuous_capital(path, hits, bets, sample_times=path.times)
print("max |log K continuous - log K discrete| at trades:", np.abs(cont.log_capital - discrete.log_capital).max())
print(f"capital at T: {np.exp(cont.log_horizon_capital):.4f} (open round factor {cont.open_factor:.4f})")
print(f"lowest capital over the grid: {np.exp(cont.sample_log_capital.min()):.4f}")
