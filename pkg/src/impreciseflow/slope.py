"""Slope diagrams and the tangent queries built on them.

For a node ``p`` every neighbor ``q`` is a point ``(|pq|, high(q))``.  The
lower-left convex chain of these points decides which neighbor is the
steepest competitor at any elevation of ``p``: chain point ``i`` wins for
``z`` between the intercepts ``z_i`` and ``z_{i-1}``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .core import ImpreciseTerrain

__all__ = [
    "DiagramTable",
    "SlopeDiagram",
    "EmptyDiagramError",
    "build_diagram",
    "min_elev_for_edge_flow",
    "expand_pws",
    "expand_down",
]


class EmptyDiagramError(ValueError):
    """Raised for an isolated node, which has no slope diagram."""


@dataclass(frozen=True)
class DiagramTable:
    """Chains of all nodes in flat CSR form (see :func:`_kernels.build_chains`)."""

    ptr: np.ndarray
    node: np.ndarray
    delta: np.ndarray
    high: np.ndarray
    intercept: np.ndarray

    @classmethod
    def build(cls, terrain: ImpreciseTerrain) -> "DiagramTable":
        arrays = K.build_chains(terrain.indptr, terrain.indices, terrain.distances, terrain.high)
        for a in arrays:
            a.setflags(write=False)
        return cls(*arrays)


@dataclass(frozen=True)
class SlopeDiagram:
    owner: int
    points: np.ndarray  # (k, 2): distance, high; leftmost first
    intercepts: np.ndarray  # (k,); last entry is -inf
    nodes: np.ndarray  # neighbor id behind each chain point

    def __len__(self) -> int:
        return len(self.nodes)

    def competitor(self, z: float) -> int:
        """Chain index of the steepest neighbor when the owner sits at ``z``."""
        # intercepts are strictly decreasing; find the first z_i < z
        zs = self.intercepts
        return int(np.searchsorted(-zs, -z, side="right"))

    def tangent(self, delta: float, z: float) -> float:
        """Axis intercept of the lower tangent from ``(delta, z)`` to the
        part of the chain right of ``delta`` (binary search); NaN if the
        chain has no point there."""
        d, h = self.points[:, 0], self.points[:, 1]
        i = K.tangent_index(d, h, 0, len(d), float(delta), float(z))
        if i < 0:
            return float("nan")
        return _intercept(delta, z, d[i], h[i])

    def tangent_linear(self, delta: float, z: float) -> float:
        """Same as :meth:`tangent` by a full scan (for cross-checking)."""
        d, h = self.points[:, 0], self.points[:, 1]
        right = d > delta
        if not right.any():
            return float("nan")
        return float(max(_intercept(delta, z, x, y) for x, y in zip(d[right], h[right])))


def _intercept(delta, z, x, y) -> float:
    return float((z * x - y * delta) / (x - delta))


def build_diagram(terrain: ImpreciseTerrain, p: int) -> SlopeDiagram:
    """Slope diagram of node ``p``."""
    if terrain.degree(p) == 0:
        raise EmptyDiagramError(f"node {p} has no neighbors")
    t = terrain.diagrams
    a, b = t.ptr[p], t.ptr[p + 1]
    return SlopeDiagram(
        owner=int(p),
        points=np.column_stack([t.delta[a:b], t.high[a:b]]),
        intercepts=np.array(t.intercept[a:b]),
        nodes=np.array(t.node[a:b]),
    )


def _edge_index(terrain: ImpreciseTerrain, u: int, v: int) -> int:
    a, b = terrain.indptr[u], terrain.indptr[u + 1]
    k = a + int(np.searchsorted(terrain.indices[a:b], v))
    if k >= b or terrain.indices[k] != v:
        raise ValueError(f"({u}, {v}) is not an edge")
    return k


def _neighbor_high(terrain: ImpreciseTerrain) -> np.ndarray:
    return terrain.high[terrain.indices]


def _min_elev(terrain, p, q, z_q, nh) -> float | None:
    k = _edge_index(terrain, p, q)
    t = terrain.diagrams
    z = K.min_elev(
        t.delta, t.high, t.intercept, t.ptr[p], t.ptr[p + 1],
        terrain.distances, nh, terrain.indptr[p], terrain.indptr[p + 1],
        terrain.distances[k], float(z_q), terrain.low[p], terrain.high[p],
    )
    return None if np.isnan(z) else float(z)


def min_elev_for_edge_flow(terrain: ImpreciseTerrain, p: int, q: int, z_q: float) -> float | None:
    """Lowest elevation of ``p`` within its interval at which ``q``, held at
    ``z_q``, is a steepest-descent neighbor of ``p`` while every other
    neighbor of ``p`` sits at its upper bound.  ``None`` if there is none."""
    return _min_elev(terrain, p, q, z_q, _neighbor_high(terrain))


def _check_in_interval(terrain, v, z):
    if not terrain.low[v] <= z <= terrain.high[v]:
        raise ValueError(
            f"elevation {z!r} outside the interval of node {v} "
            f"[{terrain.low[v]!r}, {terrain.high[v]!r}]"
        )


def expand_pws(terrain: ImpreciseTerrain, q: int, z: float) -> list[tuple[int, float]]:
    """For each neighbor ``p`` of ``q``, the minimum elevation at which
    ``p`` can drain into ``q`` when ``q`` sits at ``z`` or higher."""
    _check_in_interval(terrain, q, z)
    nh = _neighbor_high(terrain)
    out = []
    for p in terrain.neighbors(q):
        zp = _min_elev(terrain, int(p), q, z, nh)
        if zp is not None:
            out.append((int(p), zp))
    return out


def expand_down(terrain: ImpreciseTerrain, q: int, z: float) -> list[tuple[int, float]]:
    """For each neighbor ``p`` of ``q``, the maximum elevation at which
    ``p`` can receive water from ``q`` when ``q`` sits at ``z`` or lower."""
    _check_in_interval(terrain, q, z)
    nh = _neighbor_high(terrain)
    t = terrain.diagrams
    out = []
    a, b = terrain.indptr[q], terrain.indptr[q + 1]
    for k in range(a, b):
        p = int(terrain.indices[k])
        zp = K.max_recv(
            t.delta, t.high, t.intercept, t.ptr[q], t.ptr[q + 1],
            terrain.distances, nh, a, b,
            terrain.distances[k], terrain.low[q], float(z), terrain.low[p], terrain.high[p],
        )
        if not np.isnan(zp):
            out.append((p, float(zp)))
    return out
