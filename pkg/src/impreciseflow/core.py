"""Imprecise terrains, node sets and basic neighborhood queries.

An imprecise terrain is a geometric graph whose nodes have fixed planar
positions and an elevation interval ``[low, high]``.  Node ids are dense
integers ``0..n-1`` and every set-valued result iterates in ascending id
order, so outputs are reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

import numpy as np

__all__ = [
    "NodeSet",
    "ImpreciseTerrain",
    "Violation",
    "InvalidRealization",
    "validate",
    "neighborhood",
    "lowermost",
    "uppermost",
    "check_realization",
    "grid_terrain",
]


class InvalidRealization(ValueError):
    """An elevation assignment leaves some node's interval."""


class NodeSet:
    """Immutable set of node ids with ascending iteration.

    Backed by a sorted ``int64`` array.  Compares equal to another NodeSet
    with the same members and to a builtin ``set``/``frozenset`` of ints.
    """

    __slots__ = ("_ids",)

    def __init__(self, ids: Iterable[int] | np.ndarray = ()):
        if isinstance(ids, NodeSet):
            arr = ids._ids
        else:
            if not isinstance(ids, np.ndarray):
                ids = np.fromiter((int(i) for i in ids), dtype=np.int64)
            arr = np.unique(np.asarray(ids, dtype=np.int64))
            arr.setflags(write=False)
        self._ids = arr

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> "NodeSet":
        out = cls.__new__(cls)
        arr = np.flatnonzero(np.asarray(mask, dtype=bool)).astype(np.int64)
        arr.setflags(write=False)
        out._ids = arr
        return out

    @property
    def ids(self) -> np.ndarray:
        return self._ids

    def mask(self, n: int) -> np.ndarray:
        m = np.zeros(n, dtype=bool)
        m[self._ids] = True
        return m

    def complement(self, n: int) -> "NodeSet":
        return NodeSet.from_mask(~self.mask(n))

    def __iter__(self) -> Iterator[int]:
        return (int(i) for i in self._ids)

    def __len__(self) -> int:
        return int(self._ids.size)

    def __bool__(self) -> bool:
        return self._ids.size > 0

    def __contains__(self, item) -> bool:
        i = int(item)
        k = int(np.searchsorted(self._ids, i))
        return k < self._ids.size and int(self._ids[k]) == i

    def _coerce(self, other) -> "NodeSet | None":
        if isinstance(other, NodeSet):
            return other
        if isinstance(other, (set, frozenset, list, tuple, np.ndarray)):
            return NodeSet(other)
        return None

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return np.array_equal(self._ids, o._ids)

    def __hash__(self) -> int:
        return hash(self._ids.tobytes())

    def __or__(self, other) -> "NodeSet":
        o = self._coerce(other)
        return NodeSet(np.union1d(self._ids, o._ids))

    def __and__(self, other) -> "NodeSet":
        o = self._coerce(other)
        return NodeSet(np.intersect1d(self._ids, o._ids, assume_unique=True))

    def __sub__(self, other) -> "NodeSet":
        o = self._coerce(other)
        return NodeSet(np.setdiff1d(self._ids, o._ids, assume_unique=True))

    __ror__ = __or__
    __rand__ = __and__

    def __le__(self, other) -> bool:
        return self.issubset(other)

    def __ge__(self, other) -> bool:
        return self._coerce(other).issubset(self)

    def __lt__(self, other) -> bool:
        o = self._coerce(other)
        return self.issubset(o) and len(o) > len(self)

    def issubset(self, other) -> bool:
        o = self._coerce(other)
        return bool(np.isin(self._ids, o._ids, assume_unique=True).all())

    def isdisjoint(self, other) -> bool:
        o = self._coerce(other)
        return not np.isin(self._ids, o._ids, assume_unique=True).any()

    def __repr__(self) -> str:
        return f"NodeSet({self._ids.tolist()})"


@dataclass(frozen=True)
class Violation:
    """One breach of a terrain invariant; ``kind`` is one of
    ``interval``, ``nonfinite``, ``self_loop``, ``duplicate_edge``,
    ``zero_length_edge``, ``bad_node``."""

    kind: str
    nodes: tuple[int, ...]
    message: str


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


class ImpreciseTerrain:
    """Geometric graph with per-node elevation intervals.

    Parameters
    ----------
    positions : (n, 2) array
        Planar node coordinates.
    low, high : (n,) arrays
        Elevation bounds per node.
    edges : (m, 2) integer array
        Undirected edges.  Stored as given; use :func:`validate` to check
        for self-loops, duplicates and zero-length edges.
    edge_lengths : (m,) array, optional
        Planar edge lengths.  Defaults to the Euclidean distance between the
        endpoints; grid terrains pass exact cell spacings here.

    Instances are treated as immutable: all arrays are read-only.
    """

    def __init__(self, positions, low, high, edges, edge_lengths=None):
        pos = np.asarray(positions, dtype=np.float64).reshape(-1, 2)
        lo = np.asarray(low, dtype=np.float64).reshape(-1)
        hi = np.asarray(high, dtype=np.float64).reshape(-1)
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if not (pos.shape[0] == lo.size == hi.size):
            raise ValueError(
                f"positions ({pos.shape[0]}), low ({lo.size}) and high ({hi.size}) "
                "must describe the same number of nodes"
            )
        n = lo.size
        if e.size and (e.min() < 0 or e.max() >= n):
            raise ValueError("edge endpoint outside 0..n-1")
        if edge_lengths is None:
            d = pos[e[:, 1]] - pos[e[:, 0]]
            lengths = np.hypot(d[:, 0], d[:, 1])
        else:
            lengths = np.asarray(edge_lengths, dtype=np.float64).reshape(-1)
            if lengths.size != e.shape[0]:
                raise ValueError("edge_lengths must have one entry per edge")
        self.positions = _readonly(pos)
        self.low = _readonly(lo)
        self.high = _readonly(hi)
        self.edges = _readonly(e)
        self.edge_lengths = _readonly(lengths)
        # set by grid_terrain; (nrows, ncols) and spacing of a D8 raster
        self.grid_shape: tuple[int, int] | None = None
        self.cellsize: float | None = None
        self._build_adjacency()

    def _build_adjacency(self) -> None:
        n = self.n_nodes
        e = self.edges
        keep = e[:, 0] != e[:, 1]
        src = np.concatenate([e[keep, 0], e[keep, 1]])
        dst = np.concatenate([e[keep, 1], e[keep, 0]])
        dist = np.concatenate([self.edge_lengths[keep], self.edge_lengths[keep]])
        order = np.lexsort((dst, src))
        src, dst, dist = src[order], dst[order], dist[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        self.indptr = _readonly(indptr)
        self.indices = _readonly(dst)
        self.distances = _readonly(dist)

    @property
    def n_nodes(self) -> int:
        return int(self.low.size)

    @property
    def n_edges(self) -> int:
        return int(self.edges.shape[0])

    def neighbors(self, v: int) -> np.ndarray:
        """Sorted neighbor ids of ``v``."""
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def edge_length(self, u: int, v: int) -> float:
        a, b = self.indptr[u], self.indptr[u + 1]
        k = a + int(np.searchsorted(self.indices[a:b], v))
        if k >= b or self.indices[k] != v:
            raise KeyError(f"({u}, {v}) is not an edge")
        return float(self.distances[k])

    def has_edge(self, u: int, v: int) -> bool:
        try:
            self.edge_length(u, v)
        except KeyError:
            return False
        return True

    @cached_property
    def diagrams(self):
        """Slope-diagram chains of every node, built on first use."""
        from .slope import DiagramTable

        return DiagramTable.build(self)

    def with_low(self, low) -> "ImpreciseTerrain":
        """Copy with replaced lower bounds (same graph and upper bounds)."""
        t = ImpreciseTerrain(self.positions, low, self.high, self.edges, self.edge_lengths)
        t.grid_shape, t.cellsize = self.grid_shape, self.cellsize
        return t

    def __repr__(self) -> str:
        return f"ImpreciseTerrain(n_nodes={self.n_nodes}, n_edges={self.n_edges})"


def validate(terrain: ImpreciseTerrain) -> list[Violation]:
    """Return every invariant violation of ``terrain``; empty means valid."""
    out: list[Violation] = []
    lo, hi = terrain.low, terrain.high
    for v in np.flatnonzero(~(np.isfinite(lo) & np.isfinite(hi))):
        out.append(Violation("nonfinite", (int(v),), f"node {v}: non-finite elevation bound"))
    for v in np.flatnonzero(lo > hi):
        out.append(
            Violation("interval", (int(v),), f"node {v}: low {lo[v]!r} > high {hi[v]!r}")
        )
    if not np.isfinite(terrain.positions).all():
        for v in np.flatnonzero(~np.isfinite(terrain.positions).all(axis=1)):
            out.append(Violation("nonfinite", (int(v),), f"node {v}: non-finite position"))
    seen: set[tuple[int, int]] = set()
    for k, (u, v) in enumerate(terrain.edges.tolist()):
        if u == v:
            out.append(Violation("self_loop", (u,), f"edge {k}: self-loop at node {u}"))
            continue
        key = (min(u, v), max(u, v))
        if key in seen:
            out.append(Violation("duplicate_edge", key, f"edge {k}: duplicate edge {key}"))
        seen.add(key)
        if not terrain.edge_lengths[k] > 0:
            out.append(
                Violation("zero_length_edge", key, f"edge {k}: nodes {u} and {v} share a position")
            )
    return out


def _as_ids(nodes, n: int) -> np.ndarray:
    ids = NodeSet(nodes).ids
    if ids.size and (ids[0] < 0 or ids[-1] >= n):
        raise ValueError(f"node id outside 0..{n - 1}")
    return ids


def neighborhood(terrain: ImpreciseTerrain, nodes) -> NodeSet:
    """Nodes outside ``nodes`` adjacent to at least one node of it."""
    ids = _as_ids(nodes, terrain.n_nodes)
    inside = np.zeros(terrain.n_nodes, dtype=bool)
    inside[ids] = True
    ip = terrain.indptr
    if ids.size == 0:
        return NodeSet()
    nbrs = np.concatenate([terrain.indices[ip[v]:ip[v + 1]] for v in ids])
    return NodeSet(nbrs[~inside[nbrs]])


def lowermost(terrain: ImpreciseTerrain) -> np.ndarray:
    """All-low realization."""
    return np.array(terrain.low)


def uppermost(terrain: ImpreciseTerrain) -> np.ndarray:
    """All-high realization."""
    return np.array(terrain.high)


def check_realization(terrain: ImpreciseTerrain, elevations) -> np.ndarray:
    """Return ``elevations`` as a float array, raising
    :class:`InvalidRealization` if any node leaves its interval."""
    z = np.asarray(elevations, dtype=np.float64)
    if z.shape != (terrain.n_nodes,):
        raise InvalidRealization(
            f"expected {terrain.n_nodes} elevations, got shape {z.shape}"
        )
    bad = np.flatnonzero(~((terrain.low <= z) & (z <= terrain.high)))
    if bad.size:
        v = int(bad[0])
        raise InvalidRealization(
            f"node {v}: elevation {z[v]!r} outside [{terrain.low[v]!r}, {terrain.high[v]!r}]"
        )
    return z


# D8 offsets (drow, dcol) for the four "forward" directions; the other four
# are the same edges seen from the opposite end.
_D8_FORWARD = ((0, 1), (1, 0), (1, 1), (1, -1))


def grid_terrain(low, high, cellsize: float = 1.0) -> ImpreciseTerrain:
    """D8 grid terrain from row-major ``(nrows, ncols)`` rasters, north row
    first.  Node id is ``row * ncols + col``; orthogonal edges have length
    ``cellsize`` and diagonal ones ``sqrt(2) * cellsize``."""
    lo = np.asarray(low, dtype=np.float64)
    hi = np.asarray(high, dtype=np.float64)
    if lo.ndim != 2 or lo.shape != hi.shape:
        raise ValueError("low and high must be 2-D rasters of equal shape")
    if not cellsize > 0:
        raise ValueError("cellsize must be positive")
    nrows, ncols = lo.shape
    ids = np.arange(nrows * ncols, dtype=np.int64).reshape(nrows, ncols)
    diag = math.sqrt(2.0) * cellsize
    parts, lens = [], []
    for dr, dc in _D8_FORWARD:
        r0, r1 = 0, nrows - dr
        c0, c1 = max(0, -dc), ncols - max(0, dc)
        a = ids[r0:r1, c0:c1]
        b = ids[r0 + dr:r1 + dr, c0 + dc:c1 + dc]
        pair = np.stack([a.ravel(), b.ravel()], axis=1)
        pair.sort(axis=1)
        parts.append(pair)
        lens.append(np.full(pair.shape[0], diag if dr and dc else float(cellsize)))
    edges = np.concatenate(parts) if parts else np.empty((0, 2), np.int64)
    lengths = np.concatenate(lens) if lens else np.empty(0)
    order = np.lexsort((edges[:, 1], edges[:, 0]))
    rows, cols = np.divmod(np.arange(nrows * ncols), ncols)
    positions = np.stack(
        [cols * float(cellsize), (nrows - 1 - rows) * float(cellsize)], axis=1
    )
    t = ImpreciseTerrain(positions, lo.ravel(), hi.ravel(), edges[order], lengths[order])
    t.grid_shape = (nrows, ncols)
    t.cellsize = float(cellsize)
    return t
