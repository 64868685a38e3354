import math

import numpy as np
import pytest
from scipy.special import betaln

from conftest import round_trip_path
from vexgame.forcing import (
    CapitalCurve,
    MultiScaleConfig,
    dyadic_ladder,
    mix,
    play_scale,
    run_multiscale,
    two_account,
)
from vexgame.game import GridParams
from vexgame.pathgen import PathSpec, PricePath, generate


@pytest.fixture(scope="module")
def rough_paths():
    # fine scales only see the roughness when the grid resolves many steps per corridor
    return [generate(PathSpec(kind="fbm", hurst=0.3, n_points=2**20 + 1, seed=s)) for s in range(9)]


def constant(n=65):
    return generate(PathSpec(kind="constant", n_points=n))


class TestConfig:
    @pytest.mark.parametrize(
        "kw",
        [dict(a1=1.0), dict(a2=0.5), dict(k_min=0), dict(k_min=4, k_max=3), dict(range_threshold=0), dict(target=-1), dict(t1=0.5, t2=0.5)],
    )
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            MultiScaleConfig(**kw)

    def test_window_beyond_horizon(self):
        with pytest.raises(ValueError):
            MultiScaleConfig(t2=2.0).window(constant())


class TestMultiscale:
    def test_constant_path(self):
        for rec in run_multiscale(constant(), MultiScaleConfig(k_min=1, k_max=6)):
            assert rec.log_capital == 0.0 and rec.summary.n_star == 0
            assert rec.prediction is None

    def test_log_linear_closed_form(self):
        p = generate(PathSpec(kind="log_linear", slope=1.0, n_points=9))
        rec = play_scale(p, MultiScaleConfig(k_min=3, k_max=3), 3)
        rho = GridParams.from_scale(2, 2, 3).rho
        assert rec.summary.n_star == 8 and rec.summary.heads == 8
        expected = betaln(9, 1) - betaln(1, 1) - 8 * math.log(rho)
        assert rec.log_capital == pytest.approx(expected, rel=1e-12)
        assert rec.log_capital_completed == pytest.approx(expected, rel=1e-12)

    def test_per_scale_runs_are_independent(self, fbm_paths):
        p = fbm_paths(0.5, 7)
        cfg = MultiScaleConfig(k_min=2, k_max=5)
        recs = run_multiscale(p, cfg)
        assert [r.k for r in recs] == [2, 3, 4, 5]
        assert recs[2].log_capital == play_scale(p, cfg, 4).log_capital

    def test_report_row(self, fbm_paths):
        row = play_scale(fbm_paths(0.3, 1), MultiScaleConfig(), 4).as_row()
        assert list(row) == ["k", "n_star", "h", "t", "TV", "L", "sigma", "p", "logK_exact", "logK_eq12", "logK_regime"]

    def test_budget_skips_scale(self, fbm_paths, caplog):
        recs = run_multiscale(fbm_paths(0.3, 0), MultiScaleConfig(k_min=1, k_max=6, max_rounds=500))
        skipped = [r.k for r in recs if r.skipped]
        assert skipped and skipped == list(range(skipped[0], 7))
        assert all(r.log_capital is None for r in recs if r.skipped)
        assert "skipped" in caplog.text

    def test_rough_paths_grow_with_scale(self, rough_paths):
        logs = {k: [] for k in (3, 4, 5)}
        for p in rough_paths:
            for rec in run_multiscale(p, MultiScaleConfig(k_min=3, k_max=5)):
                logs[rec.k].append(rec.log_capital)
        med = [np.median(logs[k]) for k in (3, 4, 5)]
        assert med == sorted(med)


class TestTwoAccount:
    def test_idle_inside_band(self):
        p = generate(PathSpec(kind="sinusoid", amplitude=0.2, n_points=257))
        res = two_account(p, MultiScaleConfig(range_threshold=1.0, k_min=2, k_max=3))
        assert res.t_a is None and res.second is None
        assert not res.range_exceeded
        for k, lk1, lk2, total in res.log_capitals():
            assert lk2 == 0.0
            assert total == pytest.approx(math.log(0.5 * math.exp(lk1) + 0.5))

    def test_direct_move(self):
        a = 0.8
        p = generate(PathSpec(kind="log_linear", slope=a, n_points=33))
        res = two_account(p, MultiScaleConfig(range_threshold=a, k_min=2, k_max=3))
        assert res.log_move_first == pytest.approx(a)
        assert res.t_a == pytest.approx(0.5)
        assert res.anchor_guarantee(a)

    @pytest.mark.parametrize("sign", [1.0, -1.0])
    def test_round_trip(self, sign):
        a = 1.0
        times, logs = round_trip_path(a, overshoot=2.2, sign=sign)
        p = PricePath.from_log_prices(times, logs)
        res = two_account(p, MultiScaleConfig(range_threshold=a, k_min=2, k_max=3))
        assert res.range_exceeded
        assert abs(res.log_move_first) < 1e-12
        assert abs(res.log_move_second) >= a / 2 - abs(res.log_move_first)
        assert res.anchor_guarantee(a)
        assert res.second[0].hits.start_time == res.t_a

    def test_weights(self):
        with pytest.raises(ValueError):
            two_account(constant(), MultiScaleConfig(), weights=(0.7, 0.7))


def curve_of(path, k, sample):
    rec = play_scale(path, MultiScaleConfig(), k, sample_times=sample)
    return CapitalCurve.of(rec.trajectory)


class TestMix:
    def test_idempotent(self, fbm_paths):
        p = fbm_paths(0.5, 3)
        c = curve_of(p, 4, p.times)
        np.testing.assert_allclose(mix([c, c], [0.5, 0.5]).log_capital, c.log_capital, rtol=1e-13, atol=1e-14)

    def test_degenerate_weights(self, fbm_paths):
        p = fbm_paths(0.5, 3)
        c1, c2 = curve_of(p, 3, p.times), curve_of(p, 5, p.times)
        np.testing.assert_allclose(mix([c1, c2], [1.0, 0.0]).log_capital, c1.log_capital, rtol=1e-13, atol=1e-14)

    def test_linear(self, fbm_paths, rng):
        for seed in range(5):
            p = fbm_paths(0.3, seed)
            c1, c2 = curve_of(p, 3, p.times), curve_of(p, 4, p.times)
            w = rng.uniform()
            m = mix([c1, c2], [w, 1 - w])
            np.testing.assert_allclose(m.capital, w * c1.capital + (1 - w) * c2.capital, rtol=1e-12)
            assert np.all(m.capital >= 0)

    def test_validation(self, fbm_paths):
        p = fbm_paths(0.5, 3)
        c = curve_of(p, 3, p.times)
        with pytest.raises(ValueError):
            mix([c, c], [0.5, 0.5 + 1e-9])
        with pytest.raises(ValueError):
            mix([c, c], [1.5, -0.5])
        with pytest.raises(ValueError):
            mix([c, curve_of(p, 3, p.times[::2])], [0.5, 0.5])
        with pytest.raises(ValueError):
            CapitalCurve.of(play_scale(p, MultiScaleConfig(), 3).trajectory)


class TestLadder:
    def test_constant_path(self):
        res = dyadic_ladder(constant(), MultiScaleConfig(n_accounts=6))
        assert res.n_frozen == 0
        np.testing.assert_allclose(res.total, 1 - 2.0**-6, rtol=1e-15)

    def test_freeze_rule_and_conservation(self):
        seen = 0
        for seed in range(5):
            p = generate(PathSpec(kind="fbm", hurst=0.3, n_points=2**15 + 1, seed=seed))
            cfg = MultiScaleConfig(k_min=3, n_accounts=5)
            res = dyadic_ladder(p, cfg)
            assert res.ks == (3, 4, 5, 6, 7)
            np.testing.assert_allclose(res.total, res.contributions.sum(axis=0), rtol=1e-10)
            for i, freeze in enumerate(res.freeze_times, start=1):
                contrib = res.contributions[i - 1]
                assert np.all(contrib <= 1.0 + 1e-12) and np.all(contrib >= 0)
                if freeze is None:
                    continue
                seen += 1
                after = res.times >= freeze
                assert np.all(contrib[after] == 1.0)
                # an account whose free-running capital beat 2**i sits at exactly 1
                if res.final_log_capitals[i - 1] > i * math.log(2):
                    assert contrib[-1] == 1.0
        assert seen >= 1

    def test_rough_paths_freeze(self, rough_paths):
        frozen = []
        for p in rough_paths[:5]:
            frozen.append(dyadic_ladder(p, MultiScaleConfig(k_min=3, n_accounts=5)).n_frozen)
        assert np.median(frozen) >= 1
