"""Imprecise minima, proxies and terrain regularization.

An imprecise minimum is a minimal node set that holds a local minimum in
every realization.  A set qualifies exactly when its lowest upper bound
(its *bar*) lies strictly below the lower bound of every outside neighbor
and no proper subset has that property.

The regularization sweep raises a horizontal plane through all interval
endpoints.  Nodes become pending at their lower bound and final either when
they touch a final node or when the plane passes the upper bound of a
pending node, which is then reported as the proxy of its component.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.cluster.hierarchy import DisjointSet

from .core import ImpreciseTerrain, NodeSet, _as_ids, neighborhood
from .flowsim import local_minima

__all__ = [
    "MinimaReport",
    "bar",
    "is_connected",
    "is_imprecise_minimum",
    "regularize_sweep",
    "regularized_terrain",
    "irregular_minima",
    "is_regular",
]

_UNDISCOVERED, _PENDING, _FINAL = 0, 1, 2


@dataclass(frozen=True)
class MinimaReport:
    """Imprecise minima with one proxy each (ordered by proxy id) and the
    sweep's realization ``M``."""

    minima: list[NodeSet]
    proxies: list[int]
    M: np.ndarray

    def __iter__(self):
        return iter(zip(self.proxies, self.minima))


def bar(terrain: ImpreciseTerrain, nodes) -> float:
    """Lowest upper bound over ``nodes``."""
    ids = _as_ids(nodes, terrain.n_nodes)
    if ids.size == 0:
        raise ValueError("bar of an empty set is undefined")
    return float(terrain.high[ids].min())


def _flood(terrain: ImpreciseTerrain, start: int, ceiling: float) -> set[int]:
    """Component of ``start`` among nodes with ``low <= ceiling``."""
    seen = {start}
    stack = [start]
    low = terrain.low
    while stack:
        v = stack.pop()
        for u in terrain.neighbors(v):
            u = int(u)
            if u not in seen and low[u] <= ceiling:
                seen.add(u)
                stack.append(u)
    return seen


def is_connected(terrain: ImpreciseTerrain, nodes) -> bool:
    ids = _as_ids(nodes, terrain.n_nodes)
    if ids.size == 0:
        return False
    inside = set(ids.tolist())
    seen = {int(ids[0])}
    stack = [int(ids[0])]
    while stack:
        v = stack.pop()
        for u in terrain.neighbors(v):
            u = int(u)
            if u in inside and u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == len(inside)


def is_imprecise_minimum(terrain: ImpreciseTerrain, nodes) -> bool:
    """Whether the connected set ``nodes`` is an imprecise minimum."""
    ids = _as_ids(nodes, terrain.n_nodes)
    if not is_connected(terrain, ids):
        raise ValueError("node set must be nonempty and connected")
    nb = neighborhood(terrain, ids).ids
    if nb.size and not terrain.high[ids].min() < terrain.low[nb].min():
        return False
    # Any qualifying proper subset contains the flood from its lowest-bar
    # node over lows up to that bar, and such a flood always qualifies.
    inside = set(ids.tolist())
    for s in ids.tolist():
        c = _flood(terrain, s, terrain.high[s])
        if c <= inside and len(c) < len(inside):
            return False
    return True


def regularize_sweep(terrain: ImpreciseTerrain) -> MinimaReport:
    """Report one proxy per imprecise minimum and the realization ``M``."""
    n = terrain.n_nodes
    low, high = terrain.low, terrain.high
    value = np.concatenate([low, high])
    kind = np.repeat([0, 1], n)
    node = np.tile(np.arange(n), 2)
    order = np.lexsort((node, kind, value))

    state = np.full(n, _UNDISCOVERED, dtype=np.int8)
    M = np.array(low)
    comps = DisjointSet(range(n))
    proxied: set[int] = set()
    found: list[tuple[int, NodeSet]] = []

    def finalize(v, z):
        members = sorted(comps.subset(v))
        state[members] = _FINAL
        M[members] = z
        return members

    for e in order:
        v = int(node[e])
        if kind[e] == 0:
            state[v] = _PENDING
            touches_final = False
            for u in terrain.neighbors(v):
                u = int(u)
                if state[u] == _PENDING:
                    comps.merge(v, u)
                elif state[u] == _FINAL:
                    touches_final = True
            if touches_final:
                finalize(v, low[v])
        elif state[v] != _FINAL:
            root = comps[v]
            assert root not in proxied, f"component of node {v} already has a proxy"
            proxied.add(root)
            members = sorted(comps.subset(v))
            finalize(v, low[members].max())
            found.append((v, NodeSet(members)))
    found.sort(key=lambda pm: pm[0])
    return MinimaReport([m for _, m in found], [p for p, _ in found], M)


def regularized_terrain(terrain: ImpreciseTerrain) -> ImpreciseTerrain:
    """Same terrain with lower bounds raised to the sweep's realization."""
    return terrain.with_low(regularize_sweep(terrain).M)


def irregular_minima(terrain: ImpreciseTerrain) -> list[NodeSet]:
    """Local minima of the all-low realization that are not imprecise minima."""
    return [s for s in local_minima(terrain, terrain.low)
            if not is_imprecise_minimum(terrain, s)]


def is_regular(terrain: ImpreciseTerrain) -> bool:
    """Whether every local minimum of the all-low realization is an
    imprecise minimum."""
    return not irregular_minima(terrain)
