import numpy as np
import pytest

from maglab import FiniteMetricSpace, SpaceSpec, generate


@pytest.fixture
def two_points():
    return FiniteMetricSpace((0, 1), [[0.0, 1.0], [1.0, 0.0]])


def random_metric_4pt(seed: int) -> FiniteMetricSpace:
    """A random 4-point metric; entries in [1, 2] satisfy every triangle."""
    rng = np.random.default_rng(seed)
    d = rng.uniform(1.0, 2.0, size=(4, 4))
    d = np.triu(d, 1)
    return FiniteMetricSpace((0, 1, 2, 3), d + d.T)


def random_cloud(seed: int, n_max: int = 10, dim: int = 3, p: float = 2.0,
                 box: float = 1.0) -> FiniteMetricSpace:
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, n_max))
    pts = rng.uniform(0.0, box, size=(n, dim))
    return generate(SpaceSpec("point_cloud_lp", {"points": pts.tolist(), "p": p}))
