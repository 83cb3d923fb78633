"""Persistent and core watersheds.

A node is in the persistent watershed of ``Q`` when every realization
sends all of its water into ``Q``.  Its complement is found by sweeping
upward from everything outside the potential watershed while refusing to
pass through ``Q``.
"""

from __future__ import annotations

import numpy as np

from .core import ImpreciseTerrain, NodeSet, _as_ids, neighborhood
from .propagate import avoiding_potential_watershed, potential_watershed

__all__ = [
    "GuardExceeded",
    "persistent_watershed",
    "potential_minima",
    "core_watershed_bruteforce",
]


class GuardExceeded(RuntimeError):
    """An exhaustive enumeration would exceed its configured bound."""


def persistent_watershed(terrain: ImpreciseTerrain, targets) -> NodeSet:
    """Nodes whose water reaches ``targets`` in every realization."""
    n = terrain.n_nodes
    q = _as_ids(targets, n)
    if q.size == 0:
        raise ValueError("targets must be nonempty")
    escape = potential_watershed(terrain, q).members.complement(n)
    return avoiding_potential_watershed(terrain, q, escape).members.complement(n)


def potential_minima(terrain: ImpreciseTerrain, exclude=(), max_subset_size: int = 6,
                     max_subsets: int = 200_000) -> list[NodeSet]:
    """Connected node sets, disjoint from ``exclude``, that form a flat local
    minimum in some realization.

    Enumerates connected sets whose intervals share a common elevation
    (the only sets that can be flat).  Raises :class:`GuardExceeded` if such
    a set is larger than ``max_subset_size`` could still exist, or if more
    than ``max_subsets`` sets would be visited, so a returned list is
    always complete.
    """
    n = terrain.n_nodes
    banned = np.zeros(n, dtype=bool)
    banned[_as_ids(exclude, n)] = True
    low, high = terrain.low, terrain.high
    found: list[NodeSet] = []
    seen: set[frozenset[int]] = set()
    frontier = [frozenset([v]) for v in range(n) if not banned[v]]
    seen.update(frontier)
    size = 1
    while frontier:
        nxt = []
        for r in frontier:
            idx = np.fromiter(r, dtype=np.int64)
            zlo, zhi = low[idx].max(), high[idx].min()
            nb = neighborhood(terrain, idx).ids
            if nb.size == 0 or zlo < high[nb].min():
                found.append(NodeSet(idx))
            for t in nb:
                t = int(t)
                if banned[t] or max(zlo, low[t]) > min(zhi, high[t]):
                    continue
                g = r | {t}
                if g in seen:
                    continue
                if size == max_subset_size:
                    raise GuardExceeded(
                        f"flat-compatible connected sets exceed {max_subset_size} nodes"
                    )
                seen.add(g)
                nxt.append(g)
                if len(seen) > max_subsets:
                    raise GuardExceeded(f"more than {max_subsets} candidate sets")
        frontier = nxt
        size += 1
    found.sort(key=lambda s: tuple(s.ids))
    return found


def core_watershed_bruteforce(terrain: ImpreciseTerrain, targets, max_subset_size: int = 6,
                              max_subsets: int = 200_000) -> NodeSet:
    """Nodes all of whose potential flow paths lead into ``targets``.

    Exponential; meant for small test terrains.  See :func:`potential_minima`
    for the guards.
    """
    n = terrain.n_nodes
    q = _as_ids(targets, n)
    if q.size == 0:
        raise ValueError("targets must be nonempty")
    dest = potential_watershed(terrain, q).members.complement(n).mask(n)
    for r in potential_minima(terrain, q, max_subset_size, max_subsets):
        dest[r.ids] = True
    return avoiding_potential_watershed(terrain, q, np.flatnonzero(dest)).members.complement(n)
