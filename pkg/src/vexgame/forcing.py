"""Multi-scale limit-order games and the account constructions built from them.

Scale ``k`` plays the limit-order game with corridor widths
``eta_i = a_i ** -k`` and beta-binomial bets, starting from unit capital.
Rough paths (many rounds, risk-neutral edge) and smooth trending paths (few
rounds, biased outcomes) both make these capitals grow with ``k``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from .analysis import CapitalPrediction, GameSummary, predict_log_capital, summarize
from .game import (
    CapitalTrajectory,
    GridParams,
    HitSequence,
    RoundBudgetExceeded,
    continuous_capital,
    first_exit_time,
    scan_hits,
)
from .pathgen import PricePath
from .strategy import BetaBinomialParams, beta_binomial_bets, log_capital_from_counts

__all__ = [
    "MultiScaleConfig",
    "ScaleRecord",
    "TwoAccountResult",
    "CapitalCurve",
    "LadderResult",
    "play_scale",
    "run_multiscale",
    "two_account",
    "mix",
    "dyadic_ladder",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MultiScaleConfig:
    a1: float = 2.0
    a2: float = 2.0
    k_min: int = 1
    k_max: int = 5
    prior: BetaBinomialParams = field(default_factory=BetaBinomialParams)
    range_threshold: float = 1.0
    t1: float = 0.0
    t2: float | None = None
    target: float = 100.0
    n_accounts: int = 8
    max_rounds: int = 10**7

    def __post_init__(self):
        if not (self.a1 > 1 and self.a2 > 1):
            raise ValueError("scale bases a1, a2 must exceed 1")
        if not 1 <= self.k_min <= self.k_max:
            raise ValueError(f"need 1 <= k_min <= k_max, got {self.k_min}, {self.k_max}")
        if not (self.range_threshold > 0 and self.target > 0):
            raise ValueError("range threshold and target capital must be positive")
        if self.n_accounts < 1 or self.max_rounds < 1:
            raise ValueError("n_accounts and max_rounds must be positive")
        if self.t1 < 0 or (self.t2 is not None and self.t2 <= self.t1):
            raise ValueError("need 0 <= t1 < t2")

    @property
    def scales(self) -> range:
        return range(self.k_min, self.k_max + 1)

    def window(self, path: PricePath) -> tuple[float, float]:
        t2 = path.horizon if self.t2 is None else self.t2
        if t2 > path.horizon:
            raise ValueError(f"window end {t2} beyond path horizon {path.horizon}")
        return self.t1, t2


@dataclass(frozen=True, eq=False)
class ScaleRecord:
    """Outcome of one scale. Capital fields are None when the scale was skipped."""

    k: int
    grid: GridParams
    skipped: bool = False
    note: str = ""
    hits: HitSequence | None = None
    summary: GameSummary | None = None
    log_capital: float | None = None
    log_capital_completed: float | None = None
    prediction: CapitalPrediction | None = None
    trajectory: CapitalTrajectory | None = field(default=None, repr=False)

    def as_row(self) -> dict:
        s, pred = self.summary, self.prediction
        row = {
            "k": self.k,
            "n_star": None if s is None else s.n_star,
            "h": None if s is None else s.heads,
            "t": None if s is None else s.tails,
            "TV": None if s is None else s.total_variation,
            "L": None if s is None else s.net_move,
            "sigma": None if s is None else s.sigma,
            "p": None if s is None else s.p,
            "logK_exact": self.log_capital,
            "logK_eq12": None if pred is None else pred.leading,
            "logK_regime": None if pred is None else pred.regime - 0.5 * math.log(s.n_star),
        }
        return row


def play_scale(
    path: PricePath,
    cfg: MultiScaleConfig,
    k: int,
    start: float | None = None,
    sample_times=None,
) -> ScaleRecord:
    """One unit-capital beta-binomial game at scale ``k`` over the config window."""
    t1, t2 = cfg.window(path)
    start = t1 if start is None else start
    grid = GridParams.from_scale(cfg.a1, cfg.a2, k)
    try:
        hits = scan_hits(path, grid, start, t2, max_rounds=cfg.max_rounds)
    except RoundBudgetExceeded as exc:
        log.warning("scale k=%d skipped: %s", k, exc)
        return ScaleRecord(k, grid, skipped=True, note=str(exc))
    rho = grid.rho
    bets = beta_binomial_bets(hits.outcomes, cfg.prior, rho)
    traj = continuous_capital(path, hits, bets, sample_times=sample_times)
    summary = summarize(hits, grid)
    completed = float(log_capital_from_counts(hits.heads, hits.tails, cfg.prior, rho))
    return ScaleRecord(
        k=k,
        grid=grid,
        hits=hits,
        summary=summary,
        log_capital=traj.log_horizon_capital,
        log_capital_completed=completed,
        prediction=predict_log_capital(summary, cfg.a1, cfg.a2, k),
        trajectory=traj,
    )


def run_multiscale(path: PricePath, cfg: MultiScaleConfig, start: float | None = None) -> list[ScaleRecord]:
    """Independent unit-capital games for every ``k`` in ``cfg.scales``."""
    return [play_scale(path, cfg, k, start=start) for k in cfg.scales]


@dataclass(frozen=True, eq=False)
class TwoAccountResult:
    """Capital split between the game entered at ``t1`` and the one entered at ``t_a``.

    ``t_a`` is the first time the log-price strays ``A/2`` from its value at
    ``t1`` (None if it never does). The guarantee is that one of the two
    window moves is at least ``A/4`` whenever the window range exceeds ``A``.
    """

    weights: tuple[float, float]
    t_a: float | None
    first: list[ScaleRecord]
    second: list[ScaleRecord] | None
    log_move_first: float
    log_move_second: float | None
    range_exceeded: bool

    @property
    def max_abs_move(self) -> float:
        moves = [abs(self.log_move_first)]
        if self.log_move_second is not None:
            moves.append(abs(self.log_move_second))
        return max(moves)

    def anchor_guarantee(self, a: float) -> bool:
        return self.max_abs_move >= a / 4

    def log_capitals(self) -> list[tuple[int, float | None, float | None, float | None]]:
        """Per scale: ``(k, log K_k1(T), log K_k2(T), log of the weighted total)``."""
        out = []
        for i, rec in enumerate(self.first):
            lk1 = rec.log_capital
            lk2 = 0.0 if self.second is None else self.second[i].log_capital
            if lk1 is None or lk2 is None:
                out.append((rec.k, lk1, lk2, None))
                continue
            total = float(logsumexp([lk1, lk2], b=list(self.weights)))
            out.append((rec.k, lk1, lk2, total))
        return out


def two_account(path: PricePath, cfg: MultiScaleConfig, weights=(0.5, 0.5)) -> TwoAccountResult:
    w = tuple(float(x) for x in weights)
    if len(w) != 2 or min(w) < 0 or abs(sum(w) - 1.0) > 1e-12:
        raise ValueError("two_account needs two nonnegative weights summing to 1")
    t1, t2 = cfg.window(path)
    a = cfg.range_threshold
    values = path.window(t1, t2)[1]
    end = float(path.log_price_at(t2))
    start_val = float(path.log_price_at(t1))
    t_a = first_exit_time(path, a / 2, t1, t2)
    if t_a is not None and t_a >= t2:
        t_a = None
    first = run_multiscale(path, cfg)
    if t_a is None:
        second, move2 = None, None
    else:
        second = run_multiscale(path, cfg, start=t_a)
        move2 = end - float(path.log_price_at(t_a))
    return TwoAccountResult(
        weights=w,
        t_a=t_a,
        first=first,
        second=second,
        log_move_first=end - start_val,
        log_move_second=move2,
        range_exceeded=bool(values.max() - values.min() > a),
    )


@dataclass(frozen=True, eq=False)
class CapitalCurve:
    """Capital sampled on a time axis, in log units."""

    times: np.ndarray
    log_capital: np.ndarray

    @classmethod
    def of(cls, traj: CapitalTrajectory) -> "CapitalCurve":
        if traj.sample_times is None:
            raise ValueError("trajectory carries no continuous samples")
        return cls(traj.sample_times, traj.sample_log_capital)

    @property
    def capital(self) -> np.ndarray:
        return np.exp(self.log_capital)


def mix(runs: Sequence[CapitalCurve | CapitalTrajectory], weights) -> CapitalCurve:
    """Static mixture: capital is the weighted sum of the component capitals."""
    curves = [r if isinstance(r, CapitalCurve) else CapitalCurve.of(r) for r in runs]
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (len(curves),):
        raise ValueError("need one weight per run")
    if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
        raise ValueError(f"weights must be nonnegative and sum to 1, got {w.tolist()}")
    times = curves[0].times
    for c in curves[1:]:
        if not np.array_equal(c.times, times):
            raise ValueError("runs must share a time axis")
    stacked = np.vstack([c.log_capital for c in curves])
    with np.errstate(divide="ignore"):
        mixed = logsumexp(stacked, axis=0, b=w[:, None])
    return CapitalCurve(times, mixed)


@dataclass(frozen=True, eq=False)
class LadderResult:
    """Truncated dyadic account ladder.

    Account ``i`` (1-based) starts with ``2**-i``, plays scale ``ks[i-1]``
    and freezes at 1 the first time its capital reaches 1.
    ``contributions[i-1]`` is its value on ``times``.
    """

    times: np.ndarray
    ks: tuple[int, ...]
    contributions: np.ndarray
    freeze_times: tuple[float | None, ...]
    final_log_capitals: tuple[float | None, ...]
    skipped: tuple[bool, ...]

    @property
    def total(self) -> np.ndarray:
        return self.contributions.sum(axis=0)

    @property
    def n_frozen(self) -> int:
        return sum(t is not None for t in self.freeze_times)


def dyadic_ladder(path: PricePath, cfg: MultiScaleConfig, n_accounts: int | None = None) -> LadderResult:
    n_accounts = cfg.n_accounts if n_accounts is None else n_accounts
    t1, t2 = cfg.window(path)
    times = path.window(t1, t2)[0]
    ks = tuple(cfg.k_min + i for i in range(n_accounts))
    contributions = np.empty((n_accounts, times.size))
    freeze_times: list[float | None] = []
    finals: list[float | None] = []
    skipped: list[bool] = []
    for i, k in enumerate(ks, start=1):
        stake = 2.0**-i
        grid = GridParams.from_scale(cfg.a1, cfg.a2, k)
        try:
            hits = scan_hits(path, grid, t1, t2, max_rounds=cfg.max_rounds)
        except RoundBudgetExceeded as exc:
            log.warning("ladder account %d (k=%d) idle: %s", i, k, exc)
            contributions[i - 1] = stake
            freeze_times.append(None)
            finals.append(None)
            skipped.append(True)
            continue
        # capital between trades is monotone in S, so grid and trade times cover the sup
        sample = np.union1d(times, hits.times)
        traj = continuous_capital(path, hits, beta_binomial_bets(hits.outcomes, cfg.prior, grid.rho), sample_times=sample)
        log_k = traj.sample_log_capital
        reached = np.flatnonzero(log_k >= i * math.log(2.0))
        freeze = float(sample[reached[0]]) if reached.size else None
        on_axis = np.searchsorted(sample, times)
        value = stake * np.exp(np.minimum(log_k[on_axis], i * math.log(2.0)))
        if freeze is not None:
            value = np.where(times >= freeze, 1.0, value)
        contributions[i - 1] = value
        freeze_times.append(freeze)
        finals.append(traj.log_horizon_capital)
        skipped.append(False)
    return LadderResult(times, ks, contributions, tuple(freeze_times), tuple(finals), tuple(skipped))
