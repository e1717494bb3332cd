"""Price panels to diagram-distance time series.

Prices become arithmetic returns, each rolling window becomes a Pearson
correlation matrix, correlations become distances ``sqrt(2 (1 - c))`` in
[0, 2], and every sampled window's flag-complex diagram is compared with a
reference window's diagram, one homology dimension at a time.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import date, timedelta
from typing import Sequence

import numpy as np

from .complex import DEFAULT_MAX_DIM, build_flag_complex
from .graph import FiltrationDirection, SubLevel, SuperLevel, apply_direction, from_distance_matrix
from .metrics import FINANCE_INF_CAP, MetricConfig, wasserstein
from .persistence import PersistenceDiagram, compute_persistence

log = logging.getLogger(__name__)

CORRELATION_ATOL = 1e-9


@dataclass(frozen=True)
class PricePanel:
    """Adjusted closes, shape ``(n_tickers, n_dates)``."""

    tickers: tuple[str, ...]
    dates: tuple[date, ...]
    prices: np.ndarray

    def __post_init__(self) -> None:
        prices = np.array(self.prices, dtype=float)
        if prices.shape != (len(self.tickers), len(self.dates)):
            raise ValueError(
                f"price matrix shape {prices.shape} does not match "
                f"{len(self.tickers)} tickers x {len(self.dates)} dates"
            )
        if len(set(self.tickers)) != len(self.tickers):
            raise ValueError("duplicate ticker")
        for k in range(1, len(self.dates)):
            if not self.dates[k - 1] < self.dates[k]:
                raise ValueError(f"dates not strictly increasing at {self.dates[k]}")
        bad = np.argwhere(~(np.isfinite(prices) & (prices > 0)))
        if bad.size:
            i, t = bad[0]
            raise ValueError(f"nonpositive or missing price {prices[i, t]!r} for {self.tickers[i]} on {self.dates[t]}")
        prices.setflags(write=False)
        object.__setattr__(self, "tickers", tuple(self.tickers))
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "prices", prices)


@dataclass(frozen=True)
class ReturnsPanel:
    """Returns ``(S(t+1) - S(t)) / S(t)``, dated by the close that completes them."""

    tickers: tuple[str, ...]
    dates: tuple[date, ...]
    returns: np.ndarray


@dataclass(frozen=True)
class PipelineConfig:
    horizon: int = 15
    stride: int = 10
    direction: FiltrationDirection = SubLevel()
    max_dim: int = DEFAULT_MAX_DIM
    p: float = 2.0
    inf_cap: float = FINANCE_INF_CAP
    reference_index: int = 0

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise ValueError(f"horizon must be positive, got {self.horizon}")
        if self.stride < 1:
            raise ValueError(f"stride must be positive, got {self.stride}")
        if self.max_dim < 1:
            raise ValueError(f"max_dim must be at least 1, got {self.max_dim}")
        if self.reference_index < 0:
            raise ValueError(f"reference_index must be nonnegative, got {self.reference_index}")
        MetricConfig(self.p, self.inf_cap)

    def sample_indices(self, n_returns: int) -> list[int]:
        """Window end indices ``T, T + stride, ...`` that fit inside the data."""
        if self.horizon + 1 > n_returns:
            raise ValueError(f"window of {self.horizon + 1} returns needs more than {n_returns} return dates")
        return list(range(self.horizon, n_returns, self.stride))


@dataclass(frozen=True)
class DiagramDistanceSeries:
    sample_dates: tuple[date, ...]
    distances: tuple[tuple[float, ...], ...]  # indexed [dim][sample]
    reference_index: int = 0
    diagrams: tuple[PersistenceDiagram, ...] = field(default=(), compare=False)

    @property
    def max_dim(self) -> int:
        return len(self.distances)

    def rows(self) -> list[tuple[date, tuple[float, ...]]]:
        return [(d, tuple(col[k] for col in self.distances)) for k, d in enumerate(self.sample_dates)]


def compute_returns(panel: PricePanel) -> ReturnsPanel:
    if len(panel.dates) < 2:
        raise ValueError("need at least two dates to form returns")
    s = panel.prices
    r = (s[:, 1:] - s[:, :-1]) / s[:, :-1]
    r.setflags(write=False)
    return ReturnsPanel(panel.tickers, panel.dates[1:], r)


def rolling_correlation(r: ReturnsPanel | np.ndarray, t: int, horizon: int) -> np.ndarray:
    """Pearson correlation over the ``horizon + 1`` returns ending at index ``t``.

    A series that is constant over the window has no defined correlation; its
    off-diagonal entries are set to 0 and a warning is logged.
    """
    x = r.returns if isinstance(r, ReturnsPanel) else np.asarray(r, dtype=float)
    if t - horizon < 0 or t >= x.shape[1]:
        raise ValueError(f"window [{t - horizon}, {t}] is outside the {x.shape[1]} available returns")
    w = x[:, t - horizon: t + 1]
    centered = w - w.mean(axis=1, keepdims=True)
    flat = np.ptp(w, axis=1) == 0
    if flat.any():
        names = r.tickers if isinstance(r, ReturnsPanel) else range(x.shape[0])
        log.warning(
            "zero-variance returns in window ending at %d for %s; correlation set to 0",
            t,
            ", ".join(str(names[i]) for i in np.flatnonzero(flat)),
        )
    # every entry, diagonal included, goes through the same pairwise reduction,
    # so identical (or negated) rows give exactly +1 (or -1)
    n = x.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    gram_diag = (centered * centered).sum(axis=1)
    gram_off = (centered[iu] * centered[ju]).sum(axis=1)
    denom = np.sqrt(gram_diag[iu] * gram_diag[ju])
    vals = np.divide(gram_off, denom, out=np.zeros_like(gram_off), where=denom > 0)
    vals[flat[iu] | flat[ju]] = 0.0
    c = np.zeros((n, n))
    c[iu, ju] = vals
    c[ju, iu] = vals
    np.fill_diagonal(c, 1.0)
    return np.clip(c, -1.0, 1.0)


def correlation_to_distance(c):
    """``sqrt(2 (1 - c))``, elementwise for arrays, clamped into [0, 2]."""
    a = np.asarray(c, dtype=float)
    if np.any(~np.isfinite(a)) or np.any(np.abs(a) > 1.0 + CORRELATION_ATOL):
        raise ValueError(f"correlation outside [-1, 1]: {c!r}")
    d = np.clip(np.sqrt(np.clip(2.0 * (1.0 - a), 0.0, 4.0)), 0.0, 2.0)
    return float(d) if d.ndim == 0 else d


def threshold_correlation_bound(theta: float, direction: FiltrationDirection = SubLevel()) -> tuple[float, float]:
    """Correlation interval whose edges are present at threshold ``theta``."""
    if not 0.0 <= theta <= 2.0:
        raise ValueError(f"threshold must lie in [0, 2], got {theta!r}")
    if isinstance(direction, SubLevel):
        return (1.0 - theta * theta / 2.0, 1.0)
    if isinstance(direction, SuperLevel):
        if direction.theta_max != 2.0:
            raise ValueError("correlation bounds are defined for SuperLevel(2) only")
        return (-1.0, 1.0 - (2.0 - theta) ** 2 / 2.0)
    raise TypeError(f"unknown filtration direction {direction!r}")


def window_diagram(
    returns: ReturnsPanel, t: int, horizon: int, direction: FiltrationDirection, max_dim: int
) -> PersistenceDiagram:
    dist = correlation_to_distance(rolling_correlation(returns, t, horizon))
    np.fill_diagonal(dist, 0.0)
    g = apply_direction(from_distance_matrix(dist, returns.tickers), direction)
    return compute_persistence(build_flag_complex(g, max_dim), validate=False)


def _window_task(args):
    returns, t, cfg = args
    try:
        return window_diagram(returns, t, cfg.horizon, cfg.direction, cfg.max_dim)
    except ValueError as exc:
        raise ValueError(f"window ending {returns.dates[t]}: {exc}") from exc


def run_pipeline(panel: PricePanel, cfg: PipelineConfig = PipelineConfig(), workers: int = 1) -> DiagramDistanceSeries:
    """Distance series of every sampled window's diagram to the reference window's.

    With ``workers > 1`` windows are reduced in separate processes; results
    are assembled in sample order, so output does not depend on ``workers``.
    """
    returns = compute_returns(panel)
    idx = cfg.sample_indices(len(returns.dates))
    if cfg.reference_index >= len(idx):
        raise ValueError(f"reference_index {cfg.reference_index} but only {len(idx)} samples")
    tasks = [(returns, t, cfg) for t in idx]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            diagrams = list(pool.map(_window_task, tasks))
    else:
        diagrams = [_window_task(task) for task in tasks]

    ref = diagrams[cfg.reference_index]
    metric = MetricConfig(cfg.p, cfg.inf_cap)
    distances = []
    for dim in range(cfg.max_dim):
        distances.append(tuple(wasserstein(d, ref, dim, metric) for d in diagrams))
    return DiagramDistanceSeries(
        tuple(returns.dates[t] for t in idx),
        tuple(distances),
        cfg.reference_index,
        tuple(diagrams),
    )


def business_days(start: date, count: int) -> list[date]:
    out = []
    d = start
    while len(out) < count:
        if d.weekday() < 5:
            out.append(d)
        d += timedelta(days=1)
    return out


def synthetic_regime_shift(
    n_assets: int = 30,
    n_days: int = 600,
    seed: int = 0,
    noise: float = 0.01,
    factor: float = 0.02,
    start: date = date(2004, 1, 2),
) -> PricePanel:
    """Seeded panel: independent noise returns, then noise plus a shared factor.

    The common factor switches on halfway through, which pushes correlations
    toward 1 and window distances toward 0 in the second half.
    """
    rng = np.random.default_rng(seed)
    n_ret = n_days - 1
    r = rng.normal(0.0, noise, size=(n_assets, n_ret))
    half = n_ret // 2
    r[:, half:] += rng.normal(0.0, factor, size=n_ret - half)[None, :]
    prices = 100.0 * np.cumprod(np.column_stack([np.ones(n_assets), 1.0 + r]), axis=1)
    tickers = tuple(f"S{k:02d}" for k in range(n_assets))
    return PricePanel(tickers, tuple(business_days(start, n_days)), prices)


def half_means(series: Sequence[float]) -> tuple[float, float]:
    """Means of the first and second halves (the middle sample goes to the second)."""
    k = len(series) // 2
    first, second = series[:k], series[k:]
    if not first or not second:
        raise ValueError("need at least two samples")
    return (math.fsum(first) / len(first), math.fsum(second) / len(second))
