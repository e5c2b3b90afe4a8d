import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swarmsim.models.edge import SpatialGrid

from .conftest import brute_degree_sum, brute_neighbors, make_world


def _random_points(rng, n, side, planar=True):
    pos = np.zeros((n, 3))
    pos[:, :2] = rng.random((n, 2)) * side
    if not planar:
        pos[:, 2] = rng.random(n) * side * 0.2
    return pos


@pytest.mark.parametrize("edge", ["list", "simple", "cached"])
def test_line_neighbors(edge):
    w = make_world([(0, 0), (1, 0), (2, 0)], edge=edge)
    assert set(w.models.edge.neighbors(1).tolist()) == {0, 2}
    assert w.models.edge.neighbors(0).tolist() == [1]


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 120),
       side=st.floats(0.5, 12), planar=st.booleans(),
       edge=st.sampled_from(["list", "simple", "cached"]), k=st.integers(0, 40))
def test_edge_models_match_brute_force(seed, n, side, planar, edge, k):
    pos = _random_points(np.random.default_rng(seed), n, side, planar)
    extra = {"edge_model.k": k} if edge == "cached" else {}
    w = make_world(pos, edge=edge, **extra)
    oracle = brute_neighbors(pos, 1.0)
    for v in range(n):
        got = w.models.edge.neighbors(v).tolist()
        assert len(got) == len(set(got))
        assert set(got) == oracle[v]


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 80), side=st.floats(0.5, 6))
def test_symmetric(seed, n, side):
    w = make_world(_random_points(np.random.default_rng(seed), n, side))
    nb = [set(w.models.edge.neighbors(v).tolist()) for v in range(n)]
    assert all(v in nb[u] for v in range(n) for u in nb[v])


def test_batch_query_matches_single_queries():
    rng = np.random.default_rng(5)
    pos = _random_points(rng, 300, 5)
    for edge in ("list", "simple", "cached"):
        w = make_world(pos, edge=edge, **({"edge_model.k": 50} if edge == "cached" else {}))
        sources = rng.integers(0, 300, 120)
        indptr, indices = w.models.edge.neighbors_csr(sources)
        for i, s in enumerate(sources):
            assert indices[indptr[i]:indptr[i + 1]].tolist() == \
                w.models.edge.neighbors(int(s)).tolist()


def test_neighbor_order_shared_by_models():
    pos = _random_points(np.random.default_rng(8), 200, 4)
    rows = {e: [make_world(pos, edge=e).models.edge.neighbors(v).tolist() for v in range(200)]
            for e in ("list", "simple", "cached")}
    assert rows["list"] == rows["simple"] == rows["cached"]


def test_grid_grows_for_sparse_extent():
    pos = np.zeros((3, 3))
    pos[1, 0] = 1e6
    pos[2, 1] = 1e6
    grid = SpatialGrid(pos, 1.0)
    assert grid.ncx * grid.ncy <= 64
    assert grid.cell >= 1.0


def test_n100_mean_degree_below_pi():
    from swarmsim.scenario import ScenarioSpec, generate_rect_world

    pos = generate_rect_world(ScenarioSpec(100, 10, 10, seed=0))
    w = make_world(pos)
    mean = sum(w.models.edge.neighbors(v).size for v in range(100)) / 100
    # boundary effects keep the mean below the interior density pi
    assert mean < math.pi


def _expected_mean_degree(n, side, r=1.0):
    # exact probability that two uniform points in a side x side square are
    # within r (r <= side), times the n - 1 other nodes
    L = side
    p = (math.pi * r * r * L * L - 8.0 / 3.0 * r ** 3 * L + 0.5 * r ** 4) / L ** 4
    return p * (n - 1)


def test_expected_degree_formula_matches_monte_carlo():
    rng = np.random.default_rng(0)
    a = rng.random((400_000, 2)) * 10
    b = rng.random((400_000, 2)) * 10
    mc = np.mean(np.sum((a - b) ** 2, axis=1) <= 1.0) * 999
    assert mc == pytest.approx(_expected_mean_degree(1000, 10), rel=0.02)


def test_n1000_mean_degree_near_expectation():
    from swarmsim.scenario import ScenarioSpec, generate_rect_world

    pos = generate_rect_world(ScenarioSpec(1000, 10, 10, seed=0))
    w = make_world(pos)
    total = sum(w.models.edge.neighbors(v).size for v in range(1000))
    assert total == brute_degree_sum(pos, 1.0)
    assert abs(total / 1000 - _expected_mean_degree(1000, 10)) <= 0.1 * _expected_mean_degree(
        1000, 10)


def test_list_counts_entries_simple_counts_none():
    pos = _random_points(np.random.default_rng(1), 400, 6)
    lw = make_world(pos, edge="list")
    lw.models.edge.prepare()
    assert lw.models.edge.adjacency_entries_peak == brute_degree_sum(pos, 1.0)
    sw = make_world(pos, edge="simple")
    for v in range(400):
        sw.models.edge.neighbors(v)
    assert sw.models.edge.adjacency_entries_peak == 0


def test_cached_lru_bounds_entries():
    pos = _random_points(np.random.default_rng(2), 100, 4)
    w = make_world(pos, edge="cached", **{"edge_model.k": 5})
    em = w.models.edge
    degrees = [len(s) for s in brute_neighbors(pos, 1.0)]
    for v in range(100):
        em.neighbors(v)
        assert len(em._cache) <= 5
        assert em.adjacency_entries == sum(r.size for r in em._cache.values())
    assert list(em._cache) == [95, 96, 97, 98, 99]
    assert em.adjacency_entries == sum(degrees[95:])
    # a hit refreshes recency
    em.neighbors(95)
    em.neighbors(0)
    assert list(em._cache) == [97, 98, 99, 95, 0]
    assert em.adjacency_entries_peak >= em.adjacency_entries


def test_cached_zero_holds_nothing():
    pos = _random_points(np.random.default_rng(3), 50, 3)
    w = make_world(pos, edge="cached", **{"edge_model.k": 0})
    for v in range(50):
        assert set(w.models.edge.neighbors(v).tolist()) == brute_neighbors(pos, 1.0)[v]
    assert w.models.edge.adjacency_entries_peak == 0


def test_add_node_invalidates():
    w = make_world([(0, 0)])
    assert w.models.edge.neighbors(0).size == 0
    w.add_node((0.5, 0))
    assert w.models.edge.neighbors(0).tolist() == [1]
