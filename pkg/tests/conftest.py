import numpy as np
import pytest

from persnet.graph import WeightedGraph


@pytest.fixture
def rng():
    return np.random.default_rng(20260101)


@pytest.fixture
def k4_with_chords():
    # 4-cycle 0-1-2-3 at weight 1, both chords at weight 3
    return WeightedGraph(4, ((0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0), (0, 2, 3.0), (1, 3, 3.0)))
