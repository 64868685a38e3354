"""Positive continuous price paths.

A path is a finite grid of times with a price at each grid point. Between
grid points the log-price is linearly interpolated, so the path is continuous,
strictly positive, and every multiplicative price level is hit at a time that
can be solved for in closed form.

Paths carry their prices as the canonical data and ``log_prices`` is always
``np.log(prices)``; this is what makes the text format round-trip bit-exactly.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Union

import numpy as np
import scipy.linalg

__all__ = [
    "PricePath",
    "PathSpec",
    "PathFormatError",
    "gen_fbm",
    "gen_deterministic",
    "generate",
    "fgn_autocovariance",
    "write_path",
    "read_path",
    "format_path",
    "parse_path",
]

KINDS = ("fbm", "constant", "log_linear", "sinusoid", "weierstrass")
DENSE_FALLBACK_MAX_POINTS = 2**12

PathLike = Union[str, os.PathLike]


class PathFormatError(ValueError):
    """Malformed path file. ``lineno`` is 1-based and counts the header."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PricePath:
    """Sampled positive price path, piecewise linear in log-price.

    Build with :meth:`from_prices` or :meth:`from_log_prices`; the plain
    constructor validates but expects ``log_prices == np.log(prices)``.
    """

    times: np.ndarray
    prices: np.ndarray
    log_prices: np.ndarray = field(repr=False)

    def __post_init__(self):
        times = _frozen(self.times)
        prices = _frozen(self.prices)
        log_prices = _frozen(self.log_prices)
        if times.ndim != 1 or times.shape != prices.shape or prices.shape != log_prices.shape:
            raise ValueError("times, prices and log_prices must be 1-d arrays of equal length")
        if times.size < 2:
            raise ValueError("a path needs at least 2 grid points")
        if times[0] != 0.0:
            raise ValueError(f"times must start at 0, got {times[0]!r}")
        if not np.all(np.isfinite(times)):
            raise ValueError("times must be finite")
        bad = np.flatnonzero(np.diff(times) <= 0)
        if bad.size:
            raise ValueError(f"times must be strictly increasing (violated at index {bad[0] + 1})")
        bad = np.flatnonzero(~(np.isfinite(prices) & (prices > 0)))
        if bad.size:
            raise ValueError(
                f"prices must be finite and strictly positive (index {bad[0]}: {prices[bad[0]]!r})"
            )
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "prices", prices)
        object.__setattr__(self, "log_prices", log_prices)

    @classmethod
    def from_prices(cls, times, prices) -> "PricePath":
        prices = np.asarray(prices, dtype=np.float64)
        with np.errstate(divide="ignore", invalid="ignore"):
            log_prices = np.log(prices)
        return cls(np.asarray(times, dtype=np.float64), prices, log_prices)

    @classmethod
    def from_log_prices(cls, times, log_prices) -> "PricePath":
        log_prices = np.asarray(log_prices, dtype=np.float64)
        with np.errstate(over="ignore"):
            prices = np.exp(log_prices)
        return cls.from_prices(times, prices)

    def __len__(self) -> int:
        return self.times.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, PricePath):
            return NotImplemented
        return np.array_equal(self.times, other.times) and np.array_equal(self.prices, other.prices)

    __hash__ = None  # type: ignore[assignment]

    @property
    def horizon(self) -> float:
        return float(self.times[-1])

    def log_price_at(self, t):
        """Interpolated log-price at time(s) ``t`` inside ``[0, horizon]``."""
        t_arr = np.asarray(t, dtype=np.float64)
        if np.any(t_arr < 0) or np.any(t_arr > self.horizon):
            raise ValueError("time outside the path's grid")
        out = np.interp(t_arr, self.times, self.log_prices)
        return float(out) if out.ndim == 0 else out

    def window(self, t1: float, t2: float) -> tuple[np.ndarray, np.ndarray]:
        """Grid restricted to ``[t1, t2]``, endpoints interpolated if off-grid.

        Returns ``(times, log_prices)`` arrays (copies).
        """
        if not 0 <= t1 < t2 <= self.horizon:
            raise ValueError(f"need 0 <= t1 < t2 <= horizon, got [{t1}, {t2}]")
        lo = np.searchsorted(self.times, t1, side="right")
        hi = np.searchsorted(self.times, t2, side="left")
        times = self.times[lo:hi]
        values = self.log_prices[lo:hi]
        times = np.concatenate(([t1], times, [t2]))
        values = np.concatenate(([self.log_price_at(t1)], values, [self.log_price_at(t2)]))
        # keep exact grid values at grid-aligned endpoints
        if lo > 0 and self.times[lo - 1] == t1:
            values[0] = self.log_prices[lo - 1]
        if hi < self.times.size and self.times[hi] == t2:
            values[-1] = self.log_prices[hi]
        return times, values


@dataclass(frozen=True)
class PathSpec:
    """Recipe for a generated path; generators are pure functions of it."""

    kind: str = "fbm"
    hurst: float = 0.5
    sigma: float = 1.0
    horizon: float = 1.0
    n_points: int = 1025
    initial_price: float = 1.0
    seed: int = 0
    slope: float = 0.0
    amplitude: float = 0.0
    frequency: float = 1.0
    weierstrass_base: float = 2.0
    weierstrass_holder: float = 0.5

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown path kind {self.kind!r}; expected one of {KINDS}")
        if not 0.0 < self.hurst < 1.0:
            raise ValueError(f"hurst must lie in (0, 1), got {self.hurst}")
        if not self.sigma >= 0.0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        if not self.horizon > 0.0:
            raise ValueError(f"horizon must be > 0, got {self.horizon}")
        if int(self.n_points) != self.n_points or self.n_points < 2:
            raise ValueError(f"n_points must be an integer >= 2, got {self.n_points}")
        if not self.initial_price > 0.0:
            raise ValueError(f"initial_price must be > 0, got {self.initial_price}")
        if not -(2**63) <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in 64 bits")
        if self.kind == "weierstrass":
            if not self.weierstrass_base > 1.0:
                raise ValueError("weierstrass_base must be > 1")
            if not 0.0 < self.weierstrass_holder < 1.0:
                raise ValueError("weierstrass_holder must lie in (0, 1)")

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(0.0, self.horizon, int(self.n_points))


def fgn_autocovariance(hurst: float, lags) -> np.ndarray:
    """Autocovariance of unit-step fractional Gaussian noise."""
    k = np.abs(np.asarray(lags, dtype=np.float64))
    h2 = 2.0 * hurst
    return 0.5 * (np.abs(k + 1) ** h2 - 2 * k**h2 + np.abs(k - 1) ** h2)


def _fgn_circulant(m: int, hurst: float, rng: np.random.Generator) -> np.ndarray | None:
    # Davies-Harte: embed the m x m Toeplitz covariance in a 2m circulant.
    gamma = fgn_autocovariance(hurst, np.arange(m + 1))
    row = np.concatenate((gamma, gamma[-2:0:-1]))
    eig = np.fft.rfft(row).real
    eig_full = np.concatenate((eig, eig[-2:0:-1]))
    if eig_full.min() < -1e-10 * eig_full.max():
        return None
    eig_full = np.clip(eig_full, 0.0, None)
    size = eig_full.size
    z = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    y = np.fft.fft(np.sqrt(eig_full / size) * z)
    return y.real[:m]


def _fgn_dense(m: int, hurst: float, rng: np.random.Generator) -> np.ndarray:
    cov = scipy.linalg.toeplitz(fgn_autocovariance(hurst, np.arange(m)))
    try:
        factor = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        w, v = np.linalg.eigh(cov)
        factor = v * np.sqrt(np.clip(w, 0.0, None))
    return factor @ rng.standard_normal(m)


def gen_fbm(spec: PathSpec, method: str = "auto") -> PricePath:
    """``log S(t) = log S(0) + sigma * B_H(t)`` sampled exactly on a uniform grid.

    ``method`` is ``"auto"`` (circulant embedding, dense fallback),
    ``"circulant"`` or ``"dense"``.
    """
    if spec.kind != "fbm":
        raise ValueError(f"gen_fbm needs kind='fbm', got {spec.kind!r}")
    if method not in ("auto", "circulant", "dense"):
        raise ValueError(f"unknown method {method!r}")
    n = int(spec.n_points)
    m = n - 1
    times = spec.grid
    rng = np.random.default_rng(int(spec.seed) % 2**64)

    noise = None
    if method in ("auto", "circulant"):
        noise = _fgn_circulant(m, spec.hurst, rng)
        if noise is None and method == "circulant":
            raise RuntimeError(f"circulant embedding not positive definite for H={spec.hurst}, n={n}")
    if noise is None:
        if n > DENSE_FALLBACK_MAX_POINTS:
            raise RuntimeError(
                f"circulant embedding failed and n={n} exceeds the dense fallback limit "
                f"{DENSE_FALLBACK_MAX_POINTS}"
            )
        noise = _fgn_dense(m, spec.hurst, rng)

    step = spec.horizon / m
    increments = spec.sigma * step**spec.hurst * noise
    log_prices = math.log(spec.initial_price) + np.concatenate(([0.0], np.cumsum(increments)))
    return PricePath.from_log_prices(times, log_prices)


def _weierstrass_terms(base: float, holder: float, resolution: float) -> int:
    # smallest J with base**(-holder*J) < resolution
    return max(0, math.floor(-math.log(resolution) / (holder * math.log(base))) + 1)


def gen_deterministic(spec: PathSpec) -> PricePath:
    times = spec.grid
    log_s0 = math.log(spec.initial_price)
    if spec.kind == "constant":
        offsets = np.zeros_like(times)
    elif spec.kind == "log_linear":
        offsets = spec.slope * times
    elif spec.kind == "sinusoid":
        offsets = spec.amplitude * np.sin(2.0 * np.pi * spec.frequency * times)
    elif spec.kind == "weierstrass":
        b, h = spec.weierstrass_base, spec.weierstrass_holder
        n_terms = _weierstrass_terms(b, h, spec.horizon / (spec.n_points - 1))
        offsets = np.zeros_like(times)
        for j in range(n_terms + 1):
            offsets += b ** (-h * j) * np.cos(b**j * times)
    else:
        raise ValueError(f"gen_deterministic does not handle kind {spec.kind!r}")
    return PricePath.from_log_prices(times, log_s0 + offsets)


def generate(spec: PathSpec) -> PricePath:
    return gen_fbm(spec) if spec.kind == "fbm" else gen_deterministic(spec)


# -- text format -------------------------------------------------------------

HEADER = "time,price"


def format_path(path: PricePath) -> str:
    lines = [HEADER]
    lines.extend(f"{t:.17g},{p:.17g}" for t, p in zip(path.times.tolist(), path.prices.tolist()))
    return "\n".join(lines) + "\n"


def parse_path(lines: Iterable[str]) -> PricePath:
    times: list[float] = []
    prices: list[float] = []
    header_seen = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if not header_seen:
            if line.replace(" ", "") != HEADER:
                raise PathFormatError(f"expected header {HEADER!r}, got {line!r}", lineno)
            header_seen = True
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise PathFormatError(f"expected 2 comma-separated fields, got {len(parts)}", lineno)
        try:
            t, p = float(parts[0]), float(parts[1])
        except ValueError:
            raise PathFormatError(f"non-numeric field in {line!r}", lineno) from None
        if not (math.isfinite(p) and p > 0):
            raise PathFormatError(f"price must be finite and positive, got {parts[1].strip()}", lineno)
        if times and not t > times[-1]:
            raise PathFormatError(f"time {t!r} does not increase (previous {times[-1]!r})", lineno)
        times.append(t)
        prices.append(p)
    if not header_seen:
        raise PathFormatError("empty path file")
    try:
        return PricePath.from_prices(times, prices)
    except ValueError as exc:
        raise PathFormatError(str(exc)) from None


def write_path(path: PricePath, destination: PathLike) -> None:
    Path(destination).write_text(format_path(path))


def read_path(source: PathLike) -> PricePath:
    with open(source) as fh:
        return parse_path(fh)
