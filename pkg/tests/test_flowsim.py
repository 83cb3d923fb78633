import numpy as np
import pytest

from impreciseflow import ImpreciseTerrain, crossing, downstream, flow_graph, local_minima, overlay, watershed
from impreciseflow.fixtures import fork, random_grid, random_terrain
from impreciseflow.flowsim import downstream_batch, slope, watershed_batch
from conftest import line


def test_slope_values():
    t = ImpreciseTerrain([(0, 0), (1, 0), (3, 0)], [0] * 3, [5] * 3, [(0, 1), (1, 2)])
    assert slope(t, [2, 0, 0], 0, 1) == 2.0
    assert slope(t, [1, 1, 1], 0, 1) == 0.0
    assert slope(t, [0, 0, 3], 1, 2) == -1.5
    with pytest.raises(ValueError):
        slope(t, [0, 0, 0], 0, 2)


def test_flow_graph_chain():
    t = line([2, 1, 0])
    g = flow_graph(t, t.low)
    assert g.edges() == [(0, 1), (1, 2)]
    assert g.successors(2).tolist() == []


def test_flow_graph_ties_split():
    t = ImpreciseTerrain([(0, 0), (1, 0), (0, 1)], [2, 0, 0], [2, 0, 0], [(0, 1), (0, 2)])
    assert flow_graph(t, t.low).successors(0).tolist() == [1, 2]


def test_flat_pair_flows_both_ways():
    t = line([5, 1, 1, 5])
    g = flow_graph(t, t.low)
    assert (1, 2) in g.edges() and (2, 1) in g.edges()
    assert local_minima(t, t.low) == [{1, 2}]


def test_local_minima():
    assert local_minima(line([2, 1, 0]), [2, 1, 0]) == [{2}]
    t = line([3, 3, 3])
    assert local_minima(t, t.low) == [{0, 1, 2}]
    t = line([0, 1, 0])
    assert local_minima(t, t.low) == [{0}, {2}]


def test_watershed_chain():
    t = line([2, 1, 0])
    assert watershed(t, t.low, [2]) == {0, 1, 2}
    assert watershed(t, t.low, [0]) == {0}
    assert watershed(t, t.low, []) == set()


def test_watershed_fork():
    t, ids = fork()
    assert watershed(t, t.low, [ids["c"]]) == {ids["c"]}
    assert watershed(t, t.low, [ids["b"]]) == {ids["a"], ids["b"]}


def test_downstream():
    t = line([2, 1, 0])
    assert downstream(t, t.low, [0]) == {0, 1, 2}
    assert downstream(t, t.low, [2]) == {2}


def test_crossing():
    t = line([2, 1, 0])
    assert crossing(t, t.low, [2]) == []
    assert crossing(t, t.low, [1]) == [(1, 2)]
    assert crossing(t, t.low, []) == []


def test_overlay():
    t = line([0, 0, 0], [9, 9, 9])
    za = np.array([3.0, 2.0, 1.0])
    zb = np.array([5.0, 1.0, 0.0])
    # a single pair copies its watershed and leaves the rest high
    assert overlay(t, [(za, [1])]).tolist() == [3, 2, 9]
    assert overlay(t, [(za, [2]), (zb, [2])]).tolist() == [3, 1, 0]


def test_batch_matches_single(rng):
    for k in range(30):
        t = random_terrain(rng, 25) if k % 2 else random_grid(rng)
        Z = t.low + rng.random((8, t.n_nodes)) * (t.high - t.low)
        Z[0] = t.low
        q = rng.choice(t.n_nodes, 2, replace=False)
        W = watershed_batch(t, Z, q)
        D = downstream_batch(t, Z, q)
        for i, z in enumerate(Z):
            assert watershed(t, z, q) == np.flatnonzero(W[i])
            assert downstream(t, z, q) == np.flatnonzero(D[i])
