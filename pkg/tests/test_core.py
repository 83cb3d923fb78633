import math

import numpy as np
import pytest

from impreciseflow import (
    ImpreciseTerrain,
    InvalidRealization,
    NodeSet,
    check_realization,
    grid_terrain,
    lowermost,
    neighborhood,
    uppermost,
    validate,
)
from conftest import line


def test_nodeset_is_sorted_and_deduplicated():
    s = NodeSet([5, 1, 3, 1])
    assert list(s) == [1, 3, 5]
    assert list(s) == list(s)
    assert s == {1, 3, 5}
    assert 3 in s and 4 not in s
    assert len(NodeSet()) == 0 and not NodeSet()


def test_nodeset_algebra():
    a, b = NodeSet([1, 2, 3]), NodeSet([3, 4])
    assert a | b == {1, 2, 3, 4}
    assert a & b == {3}
    assert a - b == {1, 2}
    assert NodeSet([1, 2]) <= a and NodeSet([1, 2]) < a and not a < a
    assert a.complement(5) == {0, 4}
    assert NodeSet.from_mask([True, False, True]) == {0, 2}


def test_validate_accepts_valid_terrain():
    t = ImpreciseTerrain([(0, 0), (1, 0)], [0, 1], [1, 2], [(0, 1)])
    assert validate(t) == []


def test_validate_reports_inverted_interval():
    t = ImpreciseTerrain([(0, 0), (1, 0)], [3, 0], [1, 0], [(0, 1)])
    v = validate(t)
    assert [x.kind for x in v] == ["interval"] and v[0].nodes == (0,)


def test_validate_reports_self_loop():
    t = ImpreciseTerrain([(0, 0), (1, 0)], [0, 0], [0, 0], [(0, 0)])
    assert [x.kind for x in validate(t)] == ["self_loop"]


def test_validate_reports_duplicate_and_zero_length_edges():
    t = ImpreciseTerrain([(0, 0), (1, 0), (1, 0)], [0] * 3, [0] * 3, [(0, 1), (1, 0), (1, 2)])
    kinds = sorted(x.kind for x in validate(t))
    assert kinds == ["duplicate_edge", "zero_length_edge"]


def test_neighborhood():
    t = line([0, 0, 0])
    assert neighborhood(t, [1]) == {0, 2}
    assert neighborhood(t, [0, 1, 2]) == set()
    g = grid_terrain(np.zeros((3, 3)), np.zeros((3, 3)))
    assert neighborhood(g, [4]) == {0, 1, 2, 3, 5, 6, 7, 8}


def test_lowermost_uppermost():
    t = line([0, 2], [1, 5])
    assert lowermost(t).tolist() == [0, 2]
    assert uppermost(t).tolist() == [1, 5]
    d = line([3], [3])
    assert lowermost(d).tolist() == uppermost(d).tolist() == [3]


def test_check_realization():
    t = line([0, 2], [1, 5])
    assert check_realization(t, [0.5, 5]).tolist() == [0.5, 5]
    with pytest.raises(InvalidRealization, match="node 1"):
        check_realization(t, [0.5, 1.9])
    with pytest.raises(InvalidRealization):
        check_realization(t, [0.5])


def test_adjacency_and_lengths():
    t = ImpreciseTerrain([(0, 0), (3, 4), (0, 1)], [0] * 3, [0] * 3, [(1, 0), (0, 2)])
    assert t.neighbors(0).tolist() == [1, 2]
    assert t.edge_length(0, 1) == 5.0 and t.edge_length(1, 0) == 5.0
    assert t.has_edge(2, 0) and not t.has_edge(1, 2)
    with pytest.raises(KeyError):
        t.edge_length(1, 2)


def test_grid_d8():
    g = grid_terrain(np.zeros((2, 2)), np.zeros((2, 2)), cellsize=2.0)
    assert g.n_nodes == 4 and g.n_edges == 6
    assert g.edge_length(0, 1) == 2.0
    assert g.edge_length(0, 3) == math.sqrt(2.0) * 2.0
    assert grid_terrain(np.zeros((1, 3)), np.zeros((1, 3))).n_edges == 2
    g3 = grid_terrain(np.zeros((3, 3)), np.zeros((3, 3)))
    assert g3.degree(4) == 8 and g3.degree(0) == 3


def test_grid_ids_are_row_major_north_first():
    low = np.array([[1.0, 2.0], [3.0, 4.0]])
    g = grid_terrain(low, low)
    assert g.low.tolist() == [1, 2, 3, 4]
    assert g.positions[0].tolist() == [0, 1] and g.positions[3].tolist() == [1, 0]
