"""Fuzzy watershed boundaries and the fuzzy ridge on regular terrains.

Both computations reseed the upward sweep from a set of edges instead of
from target nodes: the boundary edges of the all-low watershed for a
single target set, or the edges between differently tagged regions of a
multi-source sweep for the ridge.  Each edge endpoint enters the queue at
the lowest elevation at which it can drain across that edge.
"""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

from .core import ImpreciseTerrain, NodeSet, _as_ids
from .flowsim import crossing
from .propagate import potential_watershed, sweep, tagged_potential_watershed
from .regular import irregular_minima, regularize_sweep
from .slope import _min_elev, _neighbor_high

__all__ = [
    "NonRegularTerrainError",
    "PreconditionError",
    "fuzzy_boundary_area",
    "pairwise_intersections",
    "fuzzy_ridge",
]

log = logging.getLogger(__name__)


class PreconditionError(ValueError):
    """Input violates a documented precondition of the operation."""


class NonRegularTerrainError(PreconditionError):
    """Terrain is not regular; ``minima`` lists the offending all-low minima."""

    def __init__(self, minima: list[NodeSet]):
        self.minima = minima
        shown = "; ".join("{" + ", ".join(map(str, m)) + "}" for m in minima)
        super().__init__(
            f"terrain is not regular: all-low local minima that are not imprecise minima: {shown} "
            "(regularize the terrain first)"
        )


def _require_regular(terrain: ImpreciseTerrain) -> None:
    bad = irregular_minima(terrain)
    if bad:
        raise NonRegularTerrainError(bad)


def _edge_seeds(terrain: ImpreciseTerrain, edges, z_ref) -> tuple[list[int], list[float]]:
    """Seeds for both endpoints of every edge; the opposite endpoint is held
    at ``z_ref``.  Duplicates keep their lowest elevation."""
    best: dict[int, float] = {}
    nh = _neighbor_high(terrain)
    for u, v in edges:
        for a, b in ((u, v), (v, u)):
            z = _min_elev(terrain, a, b, z_ref[b], nh)
            if z is not None and (a not in best or z < best[a]):
                best[a] = z
    nodes = sorted(best)
    return nodes, [best[v] for v in nodes]


def fuzzy_boundary_area(terrain: ImpreciseTerrain, targets) -> NodeSet:
    """Nodes that drain into ``targets`` in some but not all realizations.

    Requires a regular terrain (raises :class:`NonRegularTerrainError`).
    """
    q = _as_ids(targets, terrain.n_nodes)
    if q.size == 0:
        raise ValueError("targets must be nonempty")
    _require_regular(terrain)
    edges = crossing(terrain, terrain.low, q)
    nodes, z = _edge_seeds(terrain, edges, terrain.low)
    # an escape that passes through Q does not count; matters when Q drains onward
    return sweep(terrain, nodes, z, avoid=q).members


def _check_separated(terrain: ImpreciseTerrain, sources: np.ndarray) -> None:
    pos = {int(s): i for i, s in enumerate(sources)}
    for s in sources:
        inside = potential_watershed(terrain, [s]).members
        for t in inside:
            if t != s and t in pos:
                raise PreconditionError(
                    f"source {t} lies in the potential watershed of source {int(s)}"
                )


def pairwise_intersections(terrain: ImpreciseTerrain, sources: Sequence[int], *,
                           check: bool = True, tie_order: str = "forward") -> NodeSet:
    """Nodes lying in the potential watersheds of at least two sources.

    No source may lie in another's potential watershed; ``check=False``
    skips verifying that (one sweep per source).
    """
    src = np.asarray(list(sources), dtype=np.int64)
    if src.size < 2:
        return NodeSet()
    if check:
        _check_separated(terrain, src)
    res, sep = tagged_potential_watershed(terrain, src, tie_order=tie_order)
    nodes, z = _edge_seeds(terrain, sep, res.realization(terrain))
    return sweep(terrain, nodes, z).members


def fuzzy_ridge(terrain: ImpreciseTerrain) -> NodeSet:
    """Nodes that can drain into more than one imprecise minimum.

    Requires a regular terrain.  With fewer than two imprecise minima the
    ridge is empty and a notice is logged.
    """
    _require_regular(terrain)
    proxies = regularize_sweep(terrain).proxies
    if len(proxies) < 2:
        log.info("fewer than two imprecise minima (%d); the fuzzy ridge is empty", len(proxies))
        return NodeSet()
    # a proxy never lies in the potential watershed of another minimum
    return pairwise_intersections(terrain, proxies, check=False)
