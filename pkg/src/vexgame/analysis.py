"""Game summaries, capital-growth predictions, and path roughness diagnostics."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .game import GridParams, HitSequence
from .pathgen import PricePath
from .strategy import kl

__all__ = [
    "GameSummary",
    "CapitalPrediction",
    "VariationReport",
    "summarize",
    "n_star_from_variation",
    "predict_log_capital",
    "regime_of",
    "dyadic_sums",
    "greedy_extrema_variation",
    "p_variation",
    "vex_estimate",
    "holder_ratio_max",
    "in_event_upper",
    "in_event_lower",
    "in_event_range",
    "default_eps_grid",
]


@dataclass(frozen=True)
class GameSummary:
    """Counts and eta-variation statistics of one scanned game.

    ``sigma`` and ``p`` are None when no round completed. ``log_move`` is
    the full-window move ``log S(T) - log S(start)``, which also counts the
    still-open round.
    """

    n_star: int
    heads: int
    tails: int
    total_variation: float
    net_move: float
    sigma: float | None
    p: float | None
    log_move: float | None


def summarize(hits: HitSequence, grid: GridParams | None = None, log_move: float | None = None) -> GameSummary:
    grid = hits.grid if grid is None else grid
    h, t = hits.heads, hits.tails
    tv = h * grid.eta1 + t * grid.eta2
    net = h * grid.eta1 - t * grid.eta2
    n = h + t
    if log_move is None:
        log_move = hits.log_move
    return GameSummary(
        n_star=n,
        heads=h,
        tails=t,
        total_variation=tv,
        net_move=net,
        sigma=net / tv if n else None,
        p=h / n if n else None,
        log_move=log_move,
    )


def n_star_from_variation(summary: GameSummary, grid: GridParams) -> float:
    """Round count recovered from ``TV`` and ``sigma`` alone."""
    if summary.n_star == 0:
        return 0.0
    e1, e2 = grid.eta1, grid.eta2
    return (e1 + e2 - summary.sigma * (e1 - e2)) / (2 * e1 * e2) * summary.total_variation


def regime_of(a1: float, a2: float) -> str:
    if a1 == a2:
        return "symmetric"
    return "up_coarse" if a1 < a2 else "down_coarse"


@dataclass(frozen=True)
class CapitalPrediction:
    """Predicted growth of log capital for one scanned game.

    ``kl_growth`` is ``n* D(p || rho)``; ``leading`` subtracts ``log(n*)/2``;
    ``regime`` is the closed-form approximation of ``kl_growth`` in terms of
    ``TV`` and the window's log move for the grid's scale regime.
    ``l2_coefficient`` is the factor multiplying ``L(T)**2`` in ``regime``.

    ``expansion`` is the second-order expansion of ``n* D(p || rho)`` around
    ``p = rho`` without any scale-regime simplification,
    ``L**2 / (TV (eta1 + eta2)) + L / 2 + TV (eta1 + eta2) / 16``; it stays
    accurate in the asymmetric regimes where ``regime`` mis-sizes the
    ``TV`` term.
    """

    regime_name: str
    kl_growth: float
    leading: float
    regime: float
    l2_coefficient: float
    expansion: float


def predict_log_capital(summary: GameSummary, a1: float, a2: float, k: int) -> CapitalPrediction | None:
    """Growth predictions for the game at ``eta_i = a_i ** -k``; None if ``n* = 0``."""
    n = summary.n_star
    if n == 0:
        return None
    grid = GridParams.from_scale(a1, a2, k)
    rho = grid.rho
    growth = n * kl(summary.p, rho)
    tv = summary.total_variation
    move = summary.net_move if summary.log_move is None else summary.log_move
    name = regime_of(a1, a2)
    if name == "symmetric":
        scale = a1**k
        coef = scale / (2 * tv)
        regime = coef * move**2 + 0.5 * move + tv / (8 * scale)
    elif name == "up_coarse":
        coef = a1**k / tv
        regime = coef * move**2
    else:
        scale = a2**k
        coef = scale / tv
        regime = coef * move**2 + move + tv / (4 * scale)
    width = grid.eta1 + grid.eta2
    expansion = move**2 / (tv * width) + 0.5 * move + tv * width / 16
    return CapitalPrediction(
        name, float(growth), float(growth - 0.5 * math.log(n)), float(regime), float(coef), float(expansion)
    )


# -- p-variation ------------------------------------------------------------


def _dyadic_indices(size: int, level: int) -> np.ndarray:
    return np.unique(np.round(np.linspace(0, size - 1, 2**level + 1)).astype(np.int64))


def dyadic_sums(values, p: float, depth: int | None = None) -> np.ndarray:
    """``sum |f(t_i) - f(t_{i-1})|**p`` on the level-``j`` dyadic division, ``j = 0..depth``.

    Level ``j`` uses ``2**j`` equal index intervals (rounded onto the grid);
    ``depth`` defaults to the finest level the grid resolves.
    """
    f = np.asarray(values, dtype=np.float64)
    if p < 1:
        raise ValueError("p must be >= 1")
    max_depth = max(0, math.ceil(math.log2(max(f.size - 1, 1))))
    depth = max_depth if depth is None else min(depth, max_depth)
    out = np.empty(depth + 1)
    for j in range(depth + 1):
        idx = _dyadic_indices(f.size, j)
        out[j] = np.sum(np.abs(np.diff(f[idx])) ** p)
    return out


def greedy_extrema_variation(values, p: float) -> float:
    """``sum |increment|**p`` over the division through the path's turning points."""
    f = np.asarray(values, dtype=np.float64)
    d = np.diff(f)
    d = d[d != 0]
    if d.size == 0:
        return 0.0
    turns = np.flatnonzero(np.sign(d[1:]) != np.sign(d[:-1])) + 1
    legs = np.add.reduceat(d, np.concatenate(([0], turns)))
    return float(np.sum(np.abs(legs) ** p))


def p_variation(values, p: float, depth: int | None = None, greedy: bool = True) -> float:
    """Lower bound for the strong p-variation of the sampled function.

    Maximum over the dyadic divisions up to ``depth`` and, if ``greedy``, the
    turning-point division. Nondecreasing in ``depth``.
    """
    best = float(np.max(dyadic_sums(values, p, depth)))
    if greedy:
        best = max(best, greedy_extrema_variation(values, p))
    return best


@dataclass(frozen=True)
class VariationReport:
    p_grid: np.ndarray
    estimates: np.ndarray
    slopes: np.ndarray
    vex: float
    holder: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "holder", 1.0 / self.vex if self.vex > 0 else math.nan)


def vex_estimate(path: PricePath | np.ndarray, p_grid=None, levels=None, t1=None, t2=None) -> VariationReport:
    """Variation exponent from how dyadic p-sums scale with refinement.

    For each ``p`` the slope of ``log2`` of the dyadic sum against the level
    is fitted over ``levels`` (default: the finest six). Sums that keep
    growing under refinement signal infinite p-variation; the exponent is the
    ``p`` where the slope crosses zero, clamped to ``[1, inf]``. A constant
    path has exponent 1.
    """
    if isinstance(path, PricePath):
        t1 = 0.0 if t1 is None else t1
        t2 = path.horizon if t2 is None else t2
        values = path.window(t1, t2)[1]
    else:
        values = np.asarray(path, dtype=np.float64)
    p_grid = np.linspace(1.0, 4.0, 31) if p_grid is None else np.asarray(p_grid, dtype=np.float64)
    max_depth = max(0, math.floor(math.log2(max(values.size - 1, 1))))
    if levels is None:
        levels = np.arange(max(0, max_depth - 5), max_depth + 1)
    levels = np.asarray(levels)
    estimates = np.array([p_variation(values, p, depth=int(levels.max())) for p in p_grid])

    if np.ptp(values) == 0 or levels.size < 2:
        return VariationReport(p_grid, estimates, np.zeros_like(p_grid), 1.0)

    slopes = np.empty_like(p_grid)
    for i, p in enumerate(p_grid):
        sums = dyadic_sums(values, p, int(levels.max()))[levels]
        logs = np.log2(np.maximum(sums, np.finfo(float).tiny))
        slopes[i] = np.polyfit(levels, logs, 1)[0]

    if slopes[0] <= 0:
        vex = float(p_grid[0])
    elif np.all(slopes > 0):
        vex = math.inf
    else:
        j = int(np.flatnonzero(slopes <= 0)[0])
        s0, s1 = slopes[j - 1], slopes[j]
        vex = float(p_grid[j - 1] + (p_grid[j] - p_grid[j - 1]) * s0 / (s0 - s1))
    return VariationReport(p_grid, estimates, slopes, max(vex, 1.0))


# -- events ------------------------------------------------------------------

PAIR_SCAN_MAX_POINTS = 2**13


def _max_ratio_all_pairs(times: np.ndarray, values: np.ndarray, hurst: float) -> float:
    best = 0.0
    block = max(1, 2**22 // max(times.size, 1))
    for start in range(0, times.size - 1, block):
        stop = min(start + block, times.size - 1)
        t_x = times[start:stop, None]
        dt = times[None, :] - t_x
        dv = np.abs(values[None, :] - values[start:stop, None])
        mask = dt > 0
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(mask, dv / np.where(mask, dt, 1.0) ** hurst, 0.0)
        best = max(best, float(ratio.max()))
    return best


def holder_ratio_max(path: PricePath, hurst: float, t1: float = 0.0, t2: float | None = None) -> float:
    """``max |log S(y) - log S(x)| / |y - x| ** hurst`` over grid pairs in ``[t1, t2]``.

    Exact over all pairs up to ``PAIR_SCAN_MAX_POINTS`` grid points; above
    that, all adjacent fine pairs plus all pairs of a coarsened grid.
    """
    t2 = path.horizon if t2 is None else t2
    times, values = path.window(t1, t2)
    if times.size <= PAIR_SCAN_MAX_POINTS:
        return _max_ratio_all_pairs(times, values, hurst)
    adjacent = float(np.max(np.abs(np.diff(values)) / np.diff(times) ** hurst))
    idx = np.unique(np.round(np.linspace(0, times.size - 1, PAIR_SCAN_MAX_POINTS)).astype(np.int64))
    return max(adjacent, _max_ratio_all_pairs(times[idx], values[idx], hurst))


def in_event_upper(path: PricePath, hurst: float, c: float, t1: float = 0.0, t2: float | None = None) -> bool:
    """Whether the log-price is ``hurst``-Hölder with constant ``c`` on the window."""
    if hurst <= 0 or c <= 0:
        raise ValueError("hurst and c must be positive")
    return holder_ratio_max(path, hurst, t1, t2) <= c


def default_eps_grid(t1: float, t2: float) -> np.ndarray:
    return (t2 - t1) * 2.0 ** -np.arange(4, 11)


def in_event_lower(
    path: PricePath,
    hurst: float,
    c: float,
    t1: float = 0.0,
    t2: float | None = None,
    eps_grid=None,
    anchors=None,
) -> bool:
    """Jaggedness-from-below check on finite stand-ins for all ``eps`` and rational ``x``.

    For every ``eps`` and every anchor ``x <= t2 - eps`` some grid time
    ``y in (x, t2]`` must move the log-price by at least ``c * eps**hurst``
    while keeping ``|move| / (y - x)**hurst >= c``. Anchors default to 256
    equispaced points of ``[t1, t2]``.
    """
    if hurst <= 0 or c <= 0:
        raise ValueError("hurst and c must be positive")
    t2 = path.horizon if t2 is None else t2
    eps_grid = default_eps_grid(t1, t2) if eps_grid is None else np.asarray(eps_grid, dtype=np.float64)
    anchors = np.linspace(t1, t2, 256) if anchors is None else np.asarray(anchors, dtype=np.float64)
    anchors = anchors[(anchors >= t1) & (anchors < t2)]
    times, values = path.window(t1, t2)
    x_vals = np.interp(anchors, times, values)

    # best reachable move per anchor among y satisfying the ratio condition
    best = np.full(anchors.size, -np.inf)
    for i, (x, fx) in enumerate(zip(anchors, x_vals)):
        sel = times > x
        dt = times[sel] - x
        dv = np.abs(values[sel] - fx)
        ok = dv >= c * dt**hurst
        if np.any(ok):
            best[i] = dv[ok].max()

    for eps in eps_grid:
        relevant = anchors <= t2 - eps
        if np.any(best[relevant] < c * eps**hurst):
            return False
    return True


def in_event_range(path: PricePath, a: float, t1: float = 0.0, t2: float | None = None) -> bool:
    """Whether the log-price range on the window is at most ``a``."""
    if a <= 0:
        raise ValueError("a must be positive")
    t2 = path.horizon if t2 is None else t2
    values = path.window(t1, t2)[1]
    return float(values.max() - values.min()) <= a
