"""The beta-binomial bettor: its capital has a closed form that depends only on the counts.

The same number comes out of the round-by-round product of bet factors, and
for long balanced sequences it is n D(p||rho) - log(n)/2 up to a bounded gap.
"""
import numpy as np

from vexgame.strategy import (
    BetaBinomialParams,
    closed_form_log_capital,
    kl,
    sequential_log_capital,
    stirling_log_capital,
)

rng = np.random.default_rng(0)
prior = BetaBinomialParams(1.0, 1.0)
x = rng.random(2000) < 0.58
rho = 0.5
print(f"closed form {closed_form_log_capital(x, prior, rho):.10f}")
print(f"recursion   {sequential_log_capital(x, prior, rho):.10f}")
print(f"shuffled    {closed_form_log_capital(rng.permutation(x), prior, rho):.10f}")

n, h = x.size, int(x.sum())
print(f"n D(p||rho) = {n * kl(h / n, rho):.4f}, leading term {stirling_log_capital(n, h, rho):.4f}")

# the gap to the leading term settles down as n grows
for n in (10**2, 10**3, 10**4, 10**5):
    h = round(0.6 * n)
    gap = closed_form_log_capital([1] * h + [0] * (n - h), prior, 0.5) - stirling_log_capital(n, h, 0.5)
    print(f"n={n:>6}: gap {gap:+.5f}")
