"""Limit-order trading on a continuous path and its embedded coin-tossing game.

Starting at an entry time, Investor waits until the price first moves by a
factor ``1 + delta1`` up or ``1 / (1 + delta2)`` down, trades there, and
repeats. Each exit is a coin toss (1 = up, 0 = down) and with the right
position size the capital evolves exactly like a bet in a binary game with
risk-neutral head probability ``rho``.

Round indexing: the position that decides outcome ``x_n`` is held on
``[t_{n-1}, t_n)`` with ``t_0`` the entry time, and ``K~_n = K(t_n)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numba
import numpy as np

from .pathgen import PricePath

__all__ = [
    "GridParams",
    "HitSequence",
    "CapitalTrajectory",
    "CollateralViolation",
    "OutcomeMismatch",
    "RoundBudgetExceeded",
    "risk_neutral_rho",
    "scan_hits",
    "first_exit_time",
    "encode_outcome",
    "run_embedded_game",
    "continuous_capital",
    "bet_window",
]

OUTCOME_RTOL = 1e-9

BetProvider = Union[Callable[[np.ndarray], float], Sequence[float], np.ndarray]


class CollateralViolation(ValueError):
    """A bet would allow the capital to go negative."""


class OutcomeMismatch(ValueError):
    """A price ratio matches neither corridor boundary."""


class RoundBudgetExceeded(RuntimeError):
    def __init__(self, budget: int):
        self.budget = budget
        super().__init__(f"scan exceeded the round budget of {budget} rounds")


@dataclass(frozen=True)
class GridParams:
    """Corridor widths in log-price; ``delta_i = exp(eta_i) - 1``."""

    eta1: float
    eta2: float

    def __post_init__(self):
        if not (self.eta1 > 0 and self.eta2 > 0 and math.isfinite(self.eta1) and math.isfinite(self.eta2)):
            raise ValueError(f"corridor widths must be positive and finite, got ({self.eta1}, {self.eta2})")

    @classmethod
    def from_deltas(cls, delta1: float, delta2: float) -> "GridParams":
        if not (delta1 > 0 and delta2 > 0):
            raise ValueError(f"deltas must be > 0, got ({delta1}, {delta2})")
        return cls(math.log1p(delta1), math.log1p(delta2))

    @classmethod
    def from_scale(cls, a1: float, a2: float, k: int) -> "GridParams":
        """``eta_i = a_i ** -k``."""
        if not (a1 > 1 and a2 > 1):
            raise ValueError("scale bases must exceed 1")
        return cls(a1 ** (-k), a2 ** (-k))

    @property
    def delta1(self) -> float:
        return math.expm1(self.eta1)

    @property
    def delta2(self) -> float:
        return math.expm1(self.eta2)

    @property
    def spread(self) -> float:
        """``delta1 + delta2 + delta1 * delta2``."""
        d1, d2 = self.delta1, self.delta2
        return d1 + d2 + d1 * d2

    @property
    def rho(self) -> float:
        return risk_neutral_rho(self)

    def theta_from_nu(self, nu):
        """Position as a fraction of capital (return exposure) for game bet ``nu``."""
        return (1.0 + self.delta2) / self.spread * np.asarray(nu, dtype=np.float64)


def risk_neutral_rho(grid: GridParams) -> float:
    d1, d2 = grid.delta1, grid.delta2
    return d2 / (d1 + d2 + d1 * d2)


def bet_window(rho: float) -> tuple[float, float]:
    """Bets keeping both one-round factors nonnegative."""
    return -1.0 / (1.0 - rho), 1.0 / rho


@dataclass(frozen=True, eq=False)
class HitSequence:
    """Trading times and outcomes of one limit-order game on ``[start_time, horizon]``.

    ``times[0]`` is the entry time and ``log_prices[0]`` the entry log-price;
    ``times[i]``/``log_prices[i]`` for ``i >= 1`` are the hits, with the exact
    boundary level recorded. ``end_log_price`` is ``log S(horizon)``.
    """

    grid: GridParams
    start_time: float
    horizon: float
    times: np.ndarray
    outcomes: np.ndarray
    log_prices: np.ndarray
    end_log_price: float

    @property
    def n_star(self) -> int:
        return int(self.outcomes.size)

    @property
    def heads(self) -> int:
        return int(np.count_nonzero(self.outcomes))

    @property
    def tails(self) -> int:
        return self.n_star - self.heads

    @property
    def hit_times(self) -> np.ndarray:
        return self.times[1:]

    @property
    def log_move(self) -> float:
        """Full-window move ``log S(horizon) - log S(start_time)``."""
        return self.end_log_price - float(self.log_prices[0])

    def rows(self):
        """``(round, time, outcome, log_price)`` tuples, round 0 being the entry."""
        yield 0, float(self.times[0]), None, float(self.log_prices[0])
        for i in range(1, self.times.size):
            yield i, float(self.times[i]), int(self.outcomes[i - 1]), float(self.log_prices[i])


@numba.njit(cache=True)
def _scan_kernel(times, values, i0, t_start, y_start, t_end, eta1, eta2, out_t, out_x):
    base = y_start
    heads = 0
    tails = 0
    n = 0
    cap = out_t.size
    upper = base + eta1
    lower = base - eta2
    ta = t_start
    ya = y_start
    i = i0
    size = times.size
    while i < size:
        tb = times[i]
        yb = values[i]
        last = False
        if tb >= t_end:
            if tb > t_end:
                yb = ya + (yb - ya) * ((t_end - ta) / (tb - ta))
                tb = t_end
            last = True
        while yb >= upper or yb <= lower:
            if yb >= upper:
                level = upper
                x = 1
            else:
                level = lower
                x = 0
            th = ta + (tb - ta) * ((level - ya) / (yb - ya))
            if th > tb:
                th = tb
            if n >= cap:
                return n, True
            out_t[n] = th
            out_x[n] = x
            n += 1
            if x == 1:
                heads += 1
            else:
                tails += 1
            # recompute from counts so recorded levels never drift
            anchor = base + heads * eta1 - tails * eta2
            upper = anchor + eta1
            lower = anchor - eta2
            ta = th
            ya = anchor
        ta = tb
        ya = yb
        if last:
            break
        i += 1
    return n, False


def scan_hits(
    path: PricePath,
    grid: GridParams,
    t1: float = 0.0,
    t2: float | None = None,
    max_rounds: int | None = None,
) -> HitSequence:
    """Limit-order trading times on ``[t1, t2]`` of the log-linear interpolant.

    Each next time is the earliest one after the previous at which the
    log-price reaches ``+eta1`` or ``-eta2`` from the previous hit level; a
    grid point landing exactly on a boundary is a hit, and a hit exactly at
    ``t2`` counts as completed. Raises :class:`RoundBudgetExceeded` if more
    than ``max_rounds`` rounds complete.
    """
    if t2 is None:
        t2 = path.horizon
    if not 0.0 <= t1 < t2 <= path.horizon:
        raise ValueError(f"need 0 <= t1 < t2 <= horizon, got [{t1}, {t2}] with horizon {path.horizon}")
    times, values = path.times, path.log_prices
    y_start = float(path.log_price_at(t1))
    y_end = float(path.log_price_at(t2))
    i0 = int(np.searchsorted(times, t1, side="right"))
    i_end = int(np.searchsorted(times, t2, side="left"))

    # each round needs at least min(eta) of path travel, which bounds the count
    window_vals = np.concatenate(([y_start], values[i0:i_end], [y_end]))
    travel = float(np.sum(np.abs(np.diff(window_vals))))
    bound = int(travel / min(grid.eta1, grid.eta2)) + 2
    cap = bound if max_rounds is None else min(bound, max_rounds + 1)

    out_t = np.empty(cap, dtype=np.float64)
    out_x = np.empty(cap, dtype=np.int8)
    n, overflow = _scan_kernel(times, values, i0, float(t1), y_start, float(t2), grid.eta1, grid.eta2, out_t, out_x)
    if overflow or (max_rounds is not None and n > max_rounds):
        if max_rounds is None:  # pragma: no cover - the travel bound makes this unreachable
            raise RuntimeError("hit buffer overflow")
        raise RoundBudgetExceeded(max_rounds)

    outcomes = out_x[:n].astype(np.int8)
    heads = np.concatenate(([0], np.cumsum(outcomes, dtype=np.int64)))
    tails = np.arange(n + 1) - heads
    log_prices = y_start + heads * grid.eta1 - tails * grid.eta2
    hit_times = np.concatenate(([float(t1)], out_t[:n]))
    for a in (hit_times, outcomes, log_prices):
        a.setflags(write=False)
    return HitSequence(grid, float(t1), float(t2), hit_times, outcomes, log_prices, y_end)


def first_exit_time(path: PricePath, half_width: float, t1: float = 0.0, t2: float | None = None) -> float | None:
    """First time in ``(t1, t2]`` with ``|log S(t) - log S(t1)| >= half_width``, or None."""
    hits = scan_hits(path, GridParams(half_width, half_width), t1, t2)
    return float(hits.times[1]) if hits.n_star else None


def encode_outcome(s_prev: float, s_next: float, grid: GridParams) -> int:
    """Outcome bit of a completed round from its two prices.

    Evaluates ``((1 + delta2) S_next - S_prev) / (spread * S_prev)`` and
    checks the ratio sits on a boundary to relative ``OUTCOME_RTOL``.
    """
    if not (s_prev > 0 and s_next > 0):
        raise ValueError("prices must be positive")
    ratio = s_next / s_prev
    x = ((1.0 + grid.delta2) * s_next - s_prev) / (grid.spread * s_prev)
    if abs(ratio / (1.0 + grid.delta1) - 1.0) <= OUTCOME_RTOL:
        expected = 1
    elif abs(ratio * (1.0 + grid.delta2) - 1.0) <= OUTCOME_RTOL:
        expected = 0
    else:
        raise OutcomeMismatch(
            f"price ratio {ratio!r} matches neither 1+delta1={1 + grid.delta1!r} "
            f"nor 1/(1+delta2)={1 / (1 + grid.delta2)!r}"
        )
    if abs(x - expected) > 1e-6:  # pragma: no cover - algebraically implied by the ratio check
        raise OutcomeMismatch(f"outcome formula gave {x!r}, boundary says {expected}")
    return expected


@dataclass(frozen=True, eq=False)
class CapitalTrajectory:
    """Investor's capital in log units.

    ``log_capital[n]`` is ``log K~_n`` (``-inf`` on ruin). ``bets[n-1]`` is
    the bet of round ``n``; ``open_bet`` is the bet held after the last
    completed round. The horizon fields and samples are only set by
    :func:`continuous_capital`.
    """

    log_capital: np.ndarray
    bets: np.ndarray
    rho: float
    open_bet: float | None = None
    open_factor: float | None = None
    log_horizon_capital: float | None = None
    sample_times: np.ndarray | None = None
    sample_log_capital: np.ndarray | None = None

    @property
    def n_rounds(self) -> int:
        return int(self.bets.size)

    @property
    def capital(self) -> np.ndarray:
        return np.exp(self.log_capital)


def _resolve_bets(bets: BetProvider, outcomes: np.ndarray, count: int) -> np.ndarray:
    """Materialize ``count`` bets; callables see only the outcomes before each round."""
    if callable(bets):
        return np.array([float(bets(outcomes[:i])) for i in range(count)], dtype=np.float64)
    arr = np.asarray(bets, dtype=np.float64)
    if arr.ndim != 1 or arr.size < count:
        raise ValueError(f"need at least {count} bets, got {arr.size}")
    return arr[:count].copy()


def _check_window(nu: np.ndarray, rho: float) -> None:
    lo, hi = bet_window(rho)
    bad = np.flatnonzero((nu < lo) | (nu > hi) | ~np.isfinite(nu))
    if bad.size:
        i = bad[0]
        raise CollateralViolation(
            f"bet {nu[i]!r} in round {i + 1} is outside the nonnegativity window [{lo!r}, {hi!r}]"
        )


def _outcomes_of(hits_or_outcomes) -> np.ndarray:
    if isinstance(hits_or_outcomes, HitSequence):
        return hits_or_outcomes.outcomes.astype(np.int64)
    x = np.asarray(hits_or_outcomes, dtype=np.int64)
    if x.ndim != 1 or np.any((x != 0) & (x != 1)):
        raise ValueError("outcomes must be a 1-d sequence of 0/1")
    return x


def run_embedded_game(hits_or_outcomes, bets: BetProvider, rho: float) -> CapitalTrajectory:
    """Discrete capital ``K~_n = K~_{n-1} (1 + nu_n (x_n - rho))`` from ``K~_0 = 1``."""
    if not 0.0 < rho < 1.0:
        raise ValueError(f"rho must lie in (0, 1), got {rho}")
    x = _outcomes_of(hits_or_outcomes)
    nu = _resolve_bets(bets, x, x.size)
    _check_window(nu, rho)
    with np.errstate(divide="ignore"):
        factors = np.log(np.maximum(1.0 + nu * (x - rho), 0.0))
    log_capital = np.concatenate(([0.0], np.cumsum(factors)))
    return CapitalTrajectory(log_capital=log_capital, bets=nu, rho=rho)


def continuous_capital(
    path: PricePath,
    hits: HitSequence,
    bets: BetProvider,
    horizon: float | None = None,
    sample_times=None,
) -> CapitalTrajectory:
    """Cash capital ``K(t) = K(t_i) + M_i (S(t) - S(t_i))`` driven by the hits.

    Holdings ``M_i`` are rebuilt from the return exposure
    ``theta = (1 + delta2) / spread * nu`` and the prices at trade times, so
    this is an independent bookkeeping of the same game as
    :func:`run_embedded_game`. Needs one bet per completed round plus the
    bet held at ``horizon`` (defaults to ``hits.horizon``).
    """
    grid = hits.grid
    rho = grid.rho
    if horizon is None:
        horizon = hits.horizon
    if not hits.start_time <= horizon <= hits.horizon:
        raise ValueError("horizon must lie inside the scanned window")
    x = hits.outcomes.astype(np.int64)
    done = int(np.searchsorted(hits.hit_times, horizon, side="right"))
    nu = _resolve_bets(bets, x, done + 1)
    _check_window(nu, rho)

    theta = grid.theta_from_nu(nu)
    trade_log_prices = hits.log_prices[: done + 1]
    trade_prices = np.exp(trade_log_prices)
    # holdings per unit of capital at each trade time
    holding = theta / trade_prices

    def log_value(j, s_now):
        # capital after round j with the position of round j + 1 marked at s_now
        gain = holding[j] * (s_now - trade_prices[j])
        with np.errstate(divide="ignore"):
            return log_k[j] + np.log(np.maximum(1.0 + gain, 0.0))

    log_k = np.zeros(done + 1)
    for_rounds = holding[:done] * (trade_prices[1:] - trade_prices[:-1])
    with np.errstate(divide="ignore"):
        log_k[1:] = np.cumsum(np.log(np.maximum(1.0 + for_rounds, 0.0)))

    s_end = math.exp(float(path.log_price_at(horizon)))
    open_factor = max(1.0 + float(holding[done] * (s_end - trade_prices[done])), 0.0)
    with np.errstate(divide="ignore"):
        log_horizon = float(log_k[done] + np.log(open_factor))

    s_times = s_log = None
    if sample_times is not None:
        s_times = np.asarray(sample_times, dtype=np.float64)
        if np.any(s_times < hits.start_time) or np.any(s_times > horizon):
            raise ValueError("sample times must lie inside [start_time, horizon]")
        j = np.searchsorted(hits.hit_times[:done], s_times, side="right")
        s_now = np.exp(path.log_price_at(s_times))
        s_log = log_value(j, s_now)
        # at a trade time the capital equals the completed-round value exactly
        s_log = np.where(s_times == hits.times[j], log_k[j], s_log)

    return CapitalTrajectory(
        log_capital=log_k,
        bets=nu[:done],
        rho=rho,
        open_bet=float(nu[done]),
        open_factor=open_factor,
        log_horizon_capital=log_horizon,
        sample_times=s_times,
        sample_log_capital=s_log,
    )
