"""Priority sweeps over potential flow.

An upward sweep grows the set of nodes that can drain into a seed set:
nodes leave a min-queue in order of the lowest elevation at which they can
still drain, and each extraction offers its neighbors the lowest elevation
at which they could drain into it.  The elevations at extraction form the
canonical realization, whose exact watershed is the swept set.  The
downward sweep is the mirror image with a max-queue.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from . import _kernels as K
from .core import ImpreciseTerrain, NodeSet, _as_ids

__all__ = [
    "ReachResult",
    "sweep",
    "potential_watershed",
    "avoiding_potential_watershed",
    "tagged_potential_watershed",
    "potential_downstream",
]


@dataclass(frozen=True)
class ReachResult:
    """Outcome of a sweep.

    ``elevation`` and ``tag`` are full-length arrays; entries outside
    ``members`` are NaN and -1.  For upward sweeps ``elevation`` is the
    canonical realization on the members, for downward sweeps the highest
    elevation at which each member can still receive water.
    """

    members: NodeSet
    elevation: np.ndarray
    tag: np.ndarray
    direction: Literal["up", "down"]
    pushes: int = 0
    pops: int = 0

    def realization(self, terrain: ImpreciseTerrain) -> np.ndarray:
        """Canonical realization: member elevations, upper bounds elsewhere."""
        if self.direction != "up":
            raise ValueError("only upward sweeps define a canonical realization")
        z = np.array(terrain.high)
        m = self.members.ids
        z[m] = self.elevation[m]
        return z


def sweep(terrain: ImpreciseTerrain, nodes, elevations, *, ranks=None, avoid=None,
          direction: Literal["up", "down"] = "up") -> ReachResult:
    """Run a sweep from explicit ``(node, elevation)`` seeds.

    Seeds must lie within their node's interval.  ``ranks`` orders
    competing seeds that reach a node at the same elevation (lower wins)
    and is reported as the tag; ``avoid`` nodes are dropped when extracted
    but still act as slope competitors.
    """
    n = terrain.n_nodes
    nodes = np.asarray(nodes, dtype=np.int64).reshape(-1)
    z = np.asarray(elevations, dtype=np.float64).reshape(-1)
    if nodes.size != z.size:
        raise ValueError("one elevation per seed node is required")
    if nodes.size and (nodes.min() < 0 or nodes.max() >= n):
        raise ValueError(f"seed node outside 0..{n - 1}")
    if np.any(z < terrain.low[nodes]) or np.any(z > terrain.high[nodes]):
        raise ValueError("seed elevation outside its node's interval")
    r = np.zeros(nodes.size, dtype=np.int64) if ranks is None else np.asarray(ranks, dtype=np.int64)
    av = np.zeros(n, dtype=np.bool_)
    if avoid is not None:
        av[_as_ids(avoid, n)] = True
    t = terrain.diagrams
    out_z, out_tag, pushes, pops = K.sweep(
        terrain.indptr, terrain.indices, terrain.distances, terrain.low, terrain.high,
        t.ptr, t.delta, t.high, t.intercept, nodes, z, r, av, direction == "down",
    )
    members = NodeSet.from_mask(~np.isnan(out_z))
    return ReachResult(members, out_z, out_tag, direction, int(pushes), int(pops))


def _nonempty(terrain, targets, what) -> np.ndarray:
    ids = _as_ids(targets, terrain.n_nodes)
    if ids.size == 0:
        raise ValueError(f"{what} must be nonempty")
    return ids


def potential_watershed(terrain: ImpreciseTerrain, targets) -> ReachResult:
    """Nodes that drain into ``targets`` in at least one realization, with
    the canonical realization that makes all of them drain there at once."""
    q = _nonempty(terrain, targets, "targets")
    return sweep(terrain, q, terrain.low[q])


def avoiding_potential_watershed(terrain: ImpreciseTerrain, avoid, targets) -> ReachResult:
    """Nodes with a potential flow path into ``targets`` that does not pass
    through ``avoid`` first.  ``targets`` may be empty."""
    s = _as_ids(targets, terrain.n_nodes)
    return sweep(terrain, s, terrain.low[s], avoid=avoid)


def tagged_potential_watershed(terrain: ImpreciseTerrain, sources: Sequence[int], *,
                               tie_order: Literal["forward", "reverse"] = "forward",
                               ) -> tuple[ReachResult, list[tuple[int, int]]]:
    """Joint upward sweep from several sources, tagging every member with the
    source whose expansion reached it first.

    Returns the result (``tag`` holds source node ids) and the separator:
    the edges ``(u, v)``, ``u < v``, between members with different tags.
    ``tie_order`` flips which source wins exact ties.
    """
    src = np.asarray(list(sources), dtype=np.int64)
    if np.unique(src).size != src.size:
        raise ValueError("sources must be pairwise distinct")
    k = src.size
    ranks = np.arange(k) if tie_order == "forward" else np.arange(k)[::-1].copy()
    res = sweep(terrain, src, terrain.low[src] if k else [], ranks=ranks)
    by_rank = np.empty(k + 1, dtype=np.int64)
    by_rank[ranks] = src
    by_rank[k] = -1
    tag = by_rank[np.where(res.tag >= 0, res.tag, k)]
    res = ReachResult(res.members, res.elevation, tag, "up", res.pushes, res.pops)
    e = terrain.edges
    tu, tv = tag[e[:, 0]], tag[e[:, 1]]
    cut = (tu >= 0) & (tv >= 0) & (tu != tv)
    sep = sorted((int(min(u, v)), int(max(u, v))) for u, v in e[cut])
    return res, sep


def potential_downstream(terrain: ImpreciseTerrain, sources) -> ReachResult:
    """Nodes that receive water from ``sources`` in at least one realization,
    each with the highest elevation at which it still can."""
    q = _nonempty(terrain, sources, "sources")
    return sweep(terrain, q, terrain.high[q], direction="down")
