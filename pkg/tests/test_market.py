import logging
import math
from datetime import date

import numpy as np
import pytest

from persnet.graph import SubLevel, SuperLevel
from persnet.market import (
    PipelineConfig,
    PricePanel,
    ReturnsPanel,
    business_days,
    compute_returns,
    correlation_to_distance,
    half_means,
    rolling_correlation,
    run_pipeline,
    synthetic_regime_shift,
    threshold_correlation_bound,
)


def two_pass_pearson(x, y):
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    return sxy / math.sqrt(sxx * syy)


def panel(rows, tickers=None):
    rows = np.asarray(rows, dtype=float)
    tickers = tickers or tuple(f"T{k}" for k in range(rows.shape[0]))
    return PricePanel(tuple(tickers), tuple(business_days(date(2020, 1, 1), rows.shape[1])), rows)


def returns_of(*series):
    x = np.asarray(series, dtype=float)
    return ReturnsPanel(tuple(f"T{k}" for k in range(len(x))), tuple(range(x.shape[1])), x)


class TestReturns:
    def test_simple(self):
        assert compute_returns(panel([[100, 110]])).returns[0].tolist() == pytest.approx([0.10], abs=1e-15)

    def test_constant(self):
        assert compute_returns(panel([[5, 5, 5, 5]])).returns.tolist() == [[0.0, 0.0, 0.0]]

    def test_asymmetric(self):
        assert compute_returns(panel([[100, 50, 100]])).returns[0].tolist() == [-0.5, 1.0]

    def test_dated_by_closing_day(self):
        p = panel([[1, 2, 3]])
        assert compute_returns(p).dates == p.dates[1:]

    def test_nonpositive_price_names_ticker_and_date(self):
        with pytest.raises(ValueError, match="AXP.*2020-01-02"):
            panel([[1, 0, 2]], ("AXP",))

    def test_needs_two_dates(self):
        with pytest.raises(ValueError):
            compute_returns(panel([[1]]))


class TestRollingCorrelation:
    def test_perfect(self):
        c = rolling_correlation(returns_of([1, 2, 3], [2, 4, 6]), 2, 2)
        assert c[0, 1] == 1.0

    def test_anti(self):
        c = rolling_correlation(returns_of([1, 2, 3], [3, 2, 1]), 2, 2)
        assert c[0, 1] == -1.0

    def test_white_noise_matches_two_pass(self):
        rng = np.random.default_rng(31)
        x = rng.normal(size=(2, 40))
        c = rolling_correlation(returns_of(*x), 30, 15)
        ref = two_pass_pearson(list(x[0, 15:31]), list(x[1, 15:31]))
        assert abs(c[0, 1]) < 1
        assert c[0, 1] == pytest.approx(ref, abs=1e-12)

    def test_window_holds_horizon_plus_one_observations(self):
        x = np.array([[9.0, 1, 2, 3, 5], [-7.0, 2, 1, 4, 4]])
        c = rolling_correlation(returns_of(*x), 4, 3)
        assert c[0, 1] == pytest.approx(two_pass_pearson([1, 2, 3, 5], [2, 1, 4, 4]), abs=1e-14)

    def test_matrix_properties(self):
        rng = np.random.default_rng(32)
        c = rolling_correlation(returns_of(*rng.normal(size=(12, 50))), 49, 15)
        assert (c == c.T).all()
        assert (np.diag(c) == 1).all()
        assert (np.abs(c) <= 1).all()

    def test_flat_series_gets_zero_with_warning(self, caplog):
        with caplog.at_level(logging.WARNING):
            c = rolling_correlation(returns_of([1, 2, 3], [0.5, 0.5, 0.5], [1, 3, 2]), 2, 2)
        assert c[0, 1] == 0.0 and c[1, 2] == 0.0 and c[1, 1] == 1.0
        assert "T1" in caplog.text

    def test_window_outside_data(self):
        with pytest.raises(ValueError):
            rolling_correlation(returns_of([1, 2, 3], [1, 2, 3]), 1, 2)


class TestCorrelationToDistance:
    def test_endpoints(self):
        assert correlation_to_distance(1.0) == 0.0
        assert correlation_to_distance(-1.0) == 2.0
        assert correlation_to_distance(0.0) == pytest.approx(1.414214, abs=1e-6)

    def test_strictly_decreasing(self):
        cs = np.linspace(-1, 1, 201)
        ds = correlation_to_distance(cs)
        assert (np.diff(ds) < 0).all()

    def test_rounding_clamped(self):
        assert correlation_to_distance(1 + 1e-12) == 0.0

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            correlation_to_distance(1.01)


class TestThresholdBound:
    def test_sublevel_critical(self):
        lo, hi = threshold_correlation_bound(math.sqrt(2), SubLevel())
        assert lo == pytest.approx(0.0, abs=1e-15) and hi == 1.0

    def test_superlevel_critical(self):
        lo, hi = threshold_correlation_bound(2 - math.sqrt(2), SuperLevel(2.0))
        assert lo == -1.0 and hi == pytest.approx(0.0, abs=1e-15)
        assert 2 - math.sqrt(2) == pytest.approx(0.5857864, abs=1e-7)

    def test_zero(self):
        assert threshold_correlation_bound(0.0) == (1.0, 1.0)

    def test_outside_range(self):
        with pytest.raises(ValueError):
            threshold_correlation_bound(2.5)

    def test_agrees_with_distance_map(self):
        rng = np.random.default_rng(33)
        for c in rng.uniform(-1, 1, 50):
            d = correlation_to_distance(c)
            for theta in rng.uniform(0, 2, 5):
                lo, hi = threshold_correlation_bound(theta)
                if abs(d - theta) > 1e-9:
                    assert (d <= theta) == (lo <= c <= hi)
                lo, hi = threshold_correlation_bound(theta, SuperLevel(2.0))
                if abs((2 - d) - theta) > 1e-9:
                    assert (2 - d <= theta) == (lo <= c <= hi)


class TestPipelineConfig:
    def test_defaults(self):
        cfg = PipelineConfig()
        assert (cfg.horizon, cfg.stride, cfg.max_dim, cfg.p, cfg.inf_cap, cfg.reference_index) == (15, 10, 2, 2.0, 2.0, 0)
        assert cfg.direction == SubLevel()

    def test_sampling_grid_drops_partial_stride(self):
        assert PipelineConfig(horizon=3, stride=4).sample_indices(12) == [3, 7, 11]
        assert PipelineConfig(horizon=3, stride=4).sample_indices(11) == [3, 7]

    def test_window_must_fit(self):
        with pytest.raises(ValueError):
            PipelineConfig(horizon=15).sample_indices(15)

    @pytest.mark.parametrize("kw", [{"horizon": 0}, {"stride": 0}, {"max_dim": 0}, {"p": 0}, {"reference_index": -1}])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            PipelineConfig(**kw)


class TestRunPipeline:
    def test_reference_sample_is_zero(self):
        p = synthetic_regime_shift(n_assets=8, n_days=120, seed=3)
        for ref in (0, 4):
            s = run_pipeline(p, PipelineConfig(reference_index=ref))
            assert all(col[ref] == 0.0 for col in s.distances)
            assert all(v >= 0 for col in s.distances for v in col)

    def test_identical_assets_are_degenerate(self):
        walk = 100 * np.cumprod(1 + np.random.default_rng(34).normal(0, 0.01, 80))
        s = run_pipeline(panel(np.tile(walk, (30, 1))))
        for d in s.diagrams:
            assert d.in_dim(0) == [(0.0, math.inf)]
            assert d.in_dim(1) == []
        assert all(v == 0.0 for col in s.distances for v in col)

    def test_sample_dates_and_lengths(self):
        p = synthetic_regime_shift(n_assets=6, n_days=100, seed=4)
        s = run_pipeline(p, PipelineConfig(horizon=15, stride=10))
        returns_dates = p.dates[1:]
        assert s.sample_dates == tuple(returns_dates[t] for t in range(15, 99, 10))
        assert len(s.distances) == 2 and all(len(c) == len(s.sample_dates) for c in s.distances)

    def test_superlevel_runs(self):
        p = synthetic_regime_shift(n_assets=8, n_days=120, seed=5)
        s = run_pipeline(p, PipelineConfig(direction=SuperLevel(2.0)))
        assert s.distances[0][0] == 0.0

    def test_deterministic(self):
        p = synthetic_regime_shift(n_assets=10, n_days=150, seed=6)
        assert run_pipeline(p) == run_pipeline(p)

    def test_parallel_matches_serial(self):
        p = synthetic_regime_shift(n_assets=8, n_days=90, seed=7)
        assert run_pipeline(p, workers=2) == run_pipeline(p)

    def test_prepending_history_keeps_shared_distances(self):
        p = synthetic_regime_shift(n_assets=8, n_days=160, seed=8)
        cut = 20  # two strides of history removed
        late = PricePanel(p.tickers, p.dates[cut:], p.prices[:, cut:])
        s_late = run_pipeline(late, PipelineConfig(reference_index=1))
        s_full = run_pipeline(p, PipelineConfig(reference_index=3))
        assert s_full.sample_dates[2:2 + len(s_late.sample_dates)] == s_late.sample_dates
        for col_full, col_late in zip(s_full.distances, s_late.distances):
            assert col_full[2:2 + len(col_late)] == col_late

    def test_reference_out_of_range(self):
        p = synthetic_regime_shift(n_assets=4, n_days=40, seed=9)
        with pytest.raises(ValueError, match="reference_index"):
            run_pipeline(p, PipelineConfig(reference_index=50))


def test_synthetic_panel_is_seeded():
    a = synthetic_regime_shift(n_assets=5, n_days=50, seed=1)
    b = synthetic_regime_shift(n_assets=5, n_days=50, seed=1)
    assert (a.prices == b.prices).all() and a.dates == b.dates
    assert not (synthetic_regime_shift(n_assets=5, n_days=50, seed=2).prices == a.prices).all()


def test_half_means():
    assert half_means([1, 1, 3, 3]) == (1.0, 3.0)
