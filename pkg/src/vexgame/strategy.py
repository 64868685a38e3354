"""Beta-binomial Bayesian betting for the embedded coin-tossing game.

Investor's predictive head probability after ``h`` heads and ``t`` tails is
``(alpha + h) / (alpha + beta + h + t)``; betting

    nu = (p_hat - rho) / (rho * (1 - rho))

turns each round's capital factor into ``p_hat / rho`` (head) or
``(1 - p_hat) / (1 - rho)`` (tail), so the capital after n rounds is the
beta-binomial marginal likelihood divided by the ``rho``-coin likelihood.
Everything here works in log-space; capitals in forcing runs overflow floats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betaln, xlog1py

__all__ = [
    "BetaBinomialParams",
    "Counts",
    "predictive_prob",
    "bet_from_prob",
    "beta_binomial_bets",
    "closed_form_log_capital",
    "log_capital_from_counts",
    "sequential_log_capital",
    "kl",
    "stirling_log_capital",
]


@dataclass(frozen=True)
class BetaBinomialParams:
    """Prior pseudo-counts of heads (``alpha``) and tails (``beta``)."""

    alpha: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be finite and > 0, got {v}")


@dataclass(frozen=True)
class Counts:
    heads: int = 0
    tails: int = 0

    def __post_init__(self):
        if self.heads < 0 or self.tails < 0:
            raise ValueError("counts must be nonnegative")

    @property
    def n(self) -> int:
        return self.heads + self.tails

    @classmethod
    def of(cls, outcomes) -> "Counts":
        x = np.asarray(outcomes)
        h = int(np.count_nonzero(x))
        return cls(h, int(x.size) - h)


def _check_rho(rho: float) -> None:
    if not 0.0 < rho < 1.0:
        raise ValueError(f"rho must lie in (0, 1), got {rho}")


def predictive_prob(params: BetaBinomialParams, counts: Counts) -> float:
    return (params.alpha + counts.heads) / (params.alpha + params.beta + counts.n)


def bet_from_prob(p_hat, rho: float):
    """Bet that makes the one-round capital factor ``p_hat/rho`` or ``(1-p_hat)/(1-rho)``."""
    _check_rho(rho)
    if np.ndim(p_hat):
        return (np.asarray(p_hat, dtype=np.float64) - rho) / (rho * (1.0 - rho))
    return (p_hat - rho) / (rho * (1.0 - rho))


def beta_binomial_bets(outcomes, params: BetaBinomialParams, rho: float) -> np.ndarray:
    """Bets for rounds ``1..n+1`` given outcomes ``x_1..x_n``.

    Entry ``i`` only uses ``x_1..x_i``; the last entry is the bet on the
    still-open round after the final outcome.
    """
    x = np.asarray(outcomes, dtype=np.int64)
    heads = np.concatenate(([0], np.cumsum(x)))
    seen = np.arange(x.size + 1)
    p_hat = (params.alpha + heads) / (params.alpha + params.beta + seen)
    return (p_hat - rho) / (rho * (1.0 - rho))


def log_capital_from_counts(heads, tails, params: BetaBinomialParams, rho: float):
    """``log Q(x_1..x_n) - h log rho - t log(1 - rho)``; depends on counts only."""
    _check_rho(rho)
    log_q = betaln(params.alpha + heads, params.beta + tails) - betaln(params.alpha, params.beta)
    return log_q - heads * math.log(rho) - tails * math.log1p(-rho)


def closed_form_log_capital(outcomes, params: BetaBinomialParams, rho: float) -> float:
    c = Counts.of(outcomes)
    return float(log_capital_from_counts(c.heads, c.tails, params, rho))


def sequential_log_capital(outcomes, params: BetaBinomialParams, rho: float) -> float:
    """Sum of per-round log factors ``log(1 + nu_n (x_n - rho))``."""
    x = np.asarray(outcomes, dtype=np.float64)
    if x.size == 0:
        return 0.0
    nu = beta_binomial_bets(x, params, rho)[:-1]
    return float(np.sum(np.log1p(nu * (x - rho))))


def kl(p, q):
    """Binary Kullback-Leibler divergence ``D(p || q)`` with ``0 log 0 = 0``."""
    q_arr = np.asarray(q, dtype=np.float64)
    p_arr = np.asarray(p, dtype=np.float64)
    if np.any((q_arr <= 0) | (q_arr >= 1)):
        raise ValueError("kl: q must lie strictly inside (0, 1)")
    if np.any((p_arr < 0) | (p_arr > 1)):
        raise ValueError("kl: p must lie in [0, 1]")
    # log1p form keeps the first-order cancellation exact for p close to q
    d = xlog1py(p_arr, (p_arr - q_arr) / q_arr) + xlog1py(1 - p_arr, (q_arr - p_arr) / (1 - q_arr))
    d = np.maximum(d, 0.0)
    return float(d) if d.ndim == 0 else d


def stirling_log_capital(n, h, rho: float):
    """Leading-order log capital ``n D(h/n || rho) - log(n)/2``."""
    n_arr = np.asarray(n, dtype=np.float64)
    if np.any(n_arr < 1):
        raise ValueError("stirling_log_capital needs n >= 1")
    out = n_arr * kl(np.asarray(h, dtype=np.float64) / n_arr, rho) - 0.5 * np.log(n_arr)
    return float(out) if np.ndim(out) == 0 else out
