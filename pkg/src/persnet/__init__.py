"""Persistent homology of weighted networks and diagram-distance time series."""

from .complex import FilteredComplex, Simplex, build_flag_complex, simplex_count_by_dim
from .graph import (
    PointCloud,
    SubLevel,
    SuperLevel,
    WeightedGraph,
    apply_direction,
    from_distance_matrix,
    from_point_cloud,
    threshold_subgraph,
)
from .market import (
    DiagramDistanceSeries,
    PipelineConfig,
    PricePanel,
    ReturnsPanel,
    compute_returns,
    correlation_to_distance,
    rolling_correlation,
    run_pipeline,
    synthetic_regime_shift,
    threshold_correlation_bound,
)
from .metrics import MetricConfig, bottleneck, wasserstein, wasserstein_bruteforce
from .persistence import (
    BettiProfile,
    PersistenceDiagram,
    PersistencePoint,
    betti_at,
    betti_bruteforce,
    compute_persistence,
)

__version__ = "0.1.0"

__all__ = [
    "BettiProfile",
    "DiagramDistanceSeries",
    "FilteredComplex",
    "MetricConfig",
    "PersistenceDiagram",
    "PersistencePoint",
    "PipelineConfig",
    "PointCloud",
    "PricePanel",
    "ReturnsPanel",
    "Simplex",
    "SubLevel",
    "SuperLevel",
    "WeightedGraph",
    "apply_direction",
    "betti_at",
    "betti_bruteforce",
    "bottleneck",
    "build_flag_complex",
    "compute_persistence",
    "compute_returns",
    "correlation_to_distance",
    "from_distance_matrix",
    "from_point_cloud",
    "rolling_correlation",
    "run_pipeline",
    "simplex_count_by_dim",
    "synthetic_regime_shift",
    "threshold_correlation_bound",
    "threshold_subgraph",
    "wasserstein",
    "wasserstein_bruteforce",
]
