import itertools
import sys

import numpy as np
import pytest

from perslocal.builders import PointCloud, WeightedGraph, vr_filtration
from perslocal.complex import build_complex


def random_complex(rng, n_vertices=7, n_top=5, max_size=4):
    """Face closure of a few random simplices on ``n_vertices`` vertices."""
    tops = []
    for _ in range(n_top):
        size = int(rng.integers(1, max_size + 1))
        tops.append(tuple(sorted(rng.choice(n_vertices, size=min(size, n_vertices), replace=False).tolist())))
    # make sure every vertex exists so vertex queries are valid
    tops += [(v,) for v in range(n_vertices)]
    return build_complex(tops)


def random_cloud(rng, n_points=8):
    return PointCloud.from_points(rng.uniform(0, 1, size=(n_points, 2)))


def random_scales(rng, x, count=3):
    d = np.sort(np.unique(x.distances[np.triu_indices(len(x), 1)]))
    picks = np.sort(rng.choice(d, size=min(count, len(d)), replace=False))
    return [float(r) for r in picks]


def random_vr_filtration(rng, n_points=8, n_scales=3, max_dim=3):
    x = random_cloud(rng, n_points)
    return x, vr_filtration(x, random_scales(rng, x, n_scales), max_dim)


def random_graph(rng, n_vertices=12, p=0.4, weights=(1.0, 2.0, 3.0)):
    edges = {}
    for a, b in itertools.combinations(range(n_vertices), 2):
        if rng.random() < p:
            edges[(a, b)] = float(rng.choice(weights))
    return WeightedGraph(tuple(range(n_vertices)), edges)


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


@pytest.fixture
def example_21():
    # v=0, a=1, b=2, c=3: triangles {v,a,b} and {v,b,c}
    return build_complex([(0, 1, 2), (0, 2, 3)])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.report_lines():
        terminalreporter.write_line(line)
