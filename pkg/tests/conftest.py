import numpy as np
import pytest

from vexgame.pathgen import PathSpec, generate


@pytest.fixture(scope="session")
def fbm_paths():
    """Small fBm paths keyed by (hurst, seed), cached for the session."""
    cache = {}

    def get(hurst, seed, n_points=2**12 + 1):
        key = (hurst, seed, n_points)
        if key not in cache:
            cache[key] = generate(PathSpec(kind="fbm", hurst=hurst, n_points=n_points, seed=seed))
        return cache[key]

    return get


@pytest.fixture
def rng():
    return np.random.default_rng(20091243)


def round_trip_path(a, peak_time=0.4, overshoot=1.2, n=201, sign=1.0):
    """Log-price rises to ``sign * overshoot * a / 2`` and returns to its start at T = 1."""
    times = np.linspace(0.0, 1.0, n)
    peak = sign * overshoot * a / 2
    logs = np.where(times <= peak_time, peak * times / peak_time, peak * (1 - times) / (1 - peak_time))
    logs[-1] = 0.0
    return times, logs


def pytest_terminal_summary(terminalreporter):
    import sys

    test_acceptance = sys.modules.get("test_acceptance")
    if test_acceptance is not None and test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[number])
