"""Discrete steepest-descent flow on one fixed realization.

Water at ``p`` moves to every neighbor of maximal, non-negative slope
``(z[p] - z[q]) / |pq|``.  Slope-zero edges count, so plateaus and flat
minima are traversed by plain graph reachability.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, connected_components

from .core import ImpreciseTerrain, NodeSet, _as_ids, check_realization

__all__ = [
    "FlowGraph",
    "slope",
    "edge_slopes",
    "flow_graph",
    "local_minima",
    "watershed",
    "downstream",
    "crossing",
    "overlay",
    "watershed_batch",
    "downstream_batch",
]


@dataclass(frozen=True)
class FlowGraph:
    """Successor lists in CSR form: ``succ[ptr[p]:ptr[p+1]]`` for node ``p``."""

    ptr: np.ndarray
    succ: np.ndarray

    def successors(self, p: int) -> np.ndarray:
        return self.succ[self.ptr[p]:self.ptr[p + 1]]

    @property
    def n_nodes(self) -> int:
        return len(self.ptr) - 1

    def edges(self) -> list[tuple[int, int]]:
        src = np.repeat(np.arange(self.n_nodes), np.diff(self.ptr))
        return list(zip(src.tolist(), self.succ.tolist()))

    def to_csr(self) -> csr_matrix:
        n = self.n_nodes
        data = np.ones(len(self.succ), dtype=np.int8)
        return csr_matrix((data, self.succ, self.ptr), shape=(n, n))


def slope(terrain: ImpreciseTerrain, z, p: int, q: int) -> float:
    """Signed slope from ``p`` down to ``q``; rejects non-edges."""
    try:
        d = terrain.edge_length(p, q)
    except KeyError as exc:
        raise ValueError(str(exc)) from None
    return float((z[p] - z[q]) / d)


def _sources(terrain: ImpreciseTerrain) -> np.ndarray:
    return np.repeat(np.arange(terrain.n_nodes), np.diff(terrain.indptr))


def edge_slopes(terrain: ImpreciseTerrain, z) -> np.ndarray:
    """Slope of every directed adjacency entry, aligned with ``terrain.indices``.

    ``z`` may carry leading batch dimensions.
    """
    z = np.asarray(z, dtype=np.float64)
    src = _sources(terrain)
    return (z[..., src] - z[..., terrain.indices]) / terrain.distances


def _steepest_mask(terrain: ImpreciseTerrain, s: np.ndarray) -> np.ndarray:
    ip = terrain.indptr
    nonempty = np.flatnonzero(np.diff(ip) > 0)
    rowmax = np.full(s.shape[:-1] + (terrain.n_nodes,), -np.inf)
    if nonempty.size:
        rowmax[..., nonempty] = np.maximum.reduceat(s, ip[nonempty], axis=-1)
    return (s >= 0) & (s == rowmax[..., _sources(terrain)])


def flow_graph(terrain: ImpreciseTerrain, z) -> FlowGraph:
    """Steepest-descent successors of every node under realization ``z``."""
    z = check_realization(terrain, z)
    keep = _steepest_mask(terrain, edge_slopes(terrain, z))
    ptr = np.zeros(terrain.n_nodes + 1, dtype=np.int64)
    np.cumsum(np.bincount(_sources(terrain)[keep], minlength=terrain.n_nodes), out=ptr[1:])
    return FlowGraph(ptr, np.array(terrain.indices[keep]))


def local_minima(terrain: ImpreciseTerrain, z) -> list[NodeSet]:
    """Maximal connected equal-elevation sets with every neighbor higher,
    ordered by smallest member."""
    z = check_realization(terrain, z)
    n = terrain.n_nodes
    src = _sources(terrain)
    dst = terrain.indices
    flat = z[src] == z[dst]
    g = csr_matrix((np.ones(int(flat.sum())), (src[flat], dst[flat])), shape=(n, n))
    _, label = connected_components(g, directed=False)
    has_lower = np.zeros(n, dtype=bool)
    lower = z[dst] < z[src]
    has_lower[src[lower]] = True
    bad = np.zeros(label.max() + 1 if n else 0, dtype=bool)
    bad[label[has_lower]] = True
    groups: dict[int, list[int]] = {}
    for v in range(n):
        if not bad[label[v]]:
            groups.setdefault(int(label[v]), []).append(v)
    return [NodeSet(g) for g in groups.values()]


def _reach(terrain: ImpreciseTerrain, g: csr_matrix, seeds: np.ndarray) -> NodeSet:
    n = terrain.n_nodes
    if seeds.size == 0:
        return NodeSet()
    # virtual source n with an edge to every seed
    g = g.tocoo()
    rows = np.concatenate([g.row, np.full(seeds.size, n)])
    cols = np.concatenate([g.col, seeds])
    h = csr_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(n + 1, n + 1))
    order = breadth_first_order(h, n, directed=True, return_predecessors=False)
    return NodeSet(order[order < n])


def watershed(terrain: ImpreciseTerrain, z, targets) -> NodeSet:
    """Nodes from which water reaches ``targets`` under realization ``z``."""
    seeds = _as_ids(targets, terrain.n_nodes)
    fg = flow_graph(terrain, z)
    return _reach(terrain, fg.to_csr().T.tocsr(), seeds)


def downstream(terrain: ImpreciseTerrain, z, sources) -> NodeSet:
    """Nodes that receive water from ``sources`` under realization ``z``."""
    seeds = _as_ids(sources, terrain.n_nodes)
    return _reach(terrain, flow_graph(terrain, z).to_csr(), seeds)


def crossing(terrain: ImpreciseTerrain, z, targets) -> list[tuple[int, int]]:
    """Directed edges ``(u, v)`` leaving the watershed of ``targets``:
    ``u`` inside, ``v`` outside.  Sorted lexicographically."""
    inside = watershed(terrain, z, targets).mask(terrain.n_nodes)
    src = _sources(terrain)
    dst = terrain.indices
    keep = inside[src] & ~inside[dst]
    return list(zip(src[keep].tolist(), dst[keep].tolist()))


def overlay(terrain: ImpreciseTerrain, pairs) -> np.ndarray:
    """Watershed overlay: each node takes the lowest elevation it has in any
    listed watershed ``WS(z_i, Q_i)`` and its upper bound otherwise."""
    out = np.array(terrain.high)
    for z, q in pairs:
        z = check_realization(terrain, z)
        m = watershed(terrain, z, q).mask(terrain.n_nodes)
        out[m] = np.minimum(out[m], z[m])
    return out


def _reach_batch(terrain: ImpreciseTerrain, Z, seeds, reverse: bool, avoid=()) -> np.ndarray:
    Z = np.atleast_2d(np.asarray(Z, dtype=np.float64))
    n = terrain.n_nodes
    succ = _steepest_mask(terrain, edge_slopes(terrain, Z))
    src = _sources(terrain)
    dst = terrain.indices
    if not reverse:
        # entry (v, u) -> flag of its mirror (u, v): does u send water to v
        succ = succ[:, np.lexsort((src, dst))]
    ip = terrain.indptr
    nonempty = np.flatnonzero(np.diff(ip) > 0)
    W = np.zeros(Z.shape, dtype=bool)
    W[:, _as_ids(seeds, n)] = True
    blocked = _as_ids(avoid, n) if len(avoid) else np.empty(0, dtype=np.int64)
    for _ in range(n + 1):
        hit = succ & W[:, dst]
        new = W.copy()
        if nonempty.size:
            new[:, nonempty] |= np.logical_or.reduceat(hit, ip[nonempty], axis=1)
        new[:, blocked] = W[:, blocked]
        if np.array_equal(new, W):
            break
        W = new
    return W


def watershed_batch(terrain: ImpreciseTerrain, Z, targets, avoid=()) -> np.ndarray:
    """Watershed masks for a batch of realizations ``Z`` of shape ``(B, n)``.

    Vectorized over the batch; intended for exhaustive enumeration on small
    terrains.  Nodes in ``avoid`` are never entered, so only flow that stays
    clear of them counts.  Returns a boolean array of shape ``(B, n)``.
    """
    return _reach_batch(terrain, Z, targets, reverse=True, avoid=avoid)


def downstream_batch(terrain: ImpreciseTerrain, Z, sources) -> np.ndarray:
    """Forward-reach masks for a batch of realizations (see :func:`watershed_batch`)."""
    return _reach_batch(terrain, Z, sources, reverse=False)
