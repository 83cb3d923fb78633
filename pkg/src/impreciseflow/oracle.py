"""Brute-force reference computations for testing.

Nothing here is fast.  Realizations are enumerated over a finite grid of
candidate elevations per node, flow is simulated exactly on each, and the
results are unioned.  Such unions are certified lower bounds of the
potential sets; they match exactly once the grid holds the witness
elevations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .core import ImpreciseTerrain, NodeSet, check_realization, neighborhood
from .flowsim import downstream_batch, watershed, watershed_batch
from .propagate import ReachResult
from .watersheds import GuardExceeded

__all__ = [
    "LevelGrid",
    "enumerate_realizations",
    "iter_realization_batches",
    "pows_lower_bound",
    "podel_lower_bound",
    "avws_lower_bound",
    "psws_upper_bound",
    "verify_canonical_witness",
    "connected_subsets",
    "imprecise_minima_bruteforce",
    "min_elev_scan",
    "max_recv_scan",
]

DEFAULT_GUARD = 1_000_000


@dataclass(frozen=True)
class LevelGrid:
    """Candidate elevations per node, each sorted and inside the interval."""

    levels: tuple[np.ndarray, ...]

    @classmethod
    def build(cls, terrain: ImpreciseTerrain, extra=(), cross: bool = False) -> "LevelGrid":
        """``{low, high}`` per node plus every finite value of the arrays in
        ``extra`` (per-node, NaN ignored); ``cross`` adds every interval
        endpoint of every node that falls inside the node's interval."""
        lo, hi = terrain.low, terrain.high
        pool = np.unique(np.concatenate([lo, hi])) if cross else None
        levels = []
        for v in range(terrain.n_nodes):
            c = [lo[v], hi[v]]
            for a in extra:
                x = np.asarray(a, dtype=np.float64)[v]
                if np.isfinite(x):
                    c.append(x)
            if cross:
                c.extend(pool[(pool >= lo[v]) & (pool <= hi[v])])
            c = np.unique(np.clip(np.asarray(c, dtype=np.float64), lo[v], hi[v]))
            levels.append(c)
        return cls(tuple(levels))

    @property
    def sizes(self) -> np.ndarray:
        return np.array([len(c) for c in self.levels], dtype=np.int64)

    def count(self) -> int:
        return int(np.prod(self.sizes.astype(object))) if self.levels else 1


def iter_realization_batches(terrain: ImpreciseTerrain, grid: LevelGrid,
                             guard: int = DEFAULT_GUARD, batch: int = 4096) -> Iterator[np.ndarray]:
    """All grid realizations as ``(B, n)`` blocks in mixed-radix order
    (last node varies fastest)."""
    total = grid.count()
    if total > guard:
        raise GuardExceeded(f"{total} realizations exceed the guard of {guard}")
    sizes = grid.sizes
    n = len(sizes)
    stride = np.ones(n, dtype=np.int64)
    for v in range(n - 2, -1, -1):
        stride[v] = stride[v + 1] * sizes[v + 1]
    for start in range(0, total, batch):
        k = np.arange(start, min(start + batch, total), dtype=np.int64)
        Z = np.empty((k.size, n))
        for v in range(n):
            Z[:, v] = grid.levels[v][(k // stride[v]) % sizes[v]]
        yield Z


def enumerate_realizations(terrain: ImpreciseTerrain, grid: LevelGrid,
                           guard: int = DEFAULT_GUARD) -> Iterator[np.ndarray]:
    """Every grid realization exactly once, in a fixed order."""
    for Z in iter_realization_batches(terrain, grid, guard):
        yield from Z


def pows_lower_bound(terrain: ImpreciseTerrain, targets, grid: LevelGrid,
                     guard: int = DEFAULT_GUARD) -> NodeSet:
    """Union of exact watersheds of ``targets`` over all grid realizations."""
    acc = np.zeros(terrain.n_nodes, dtype=bool)
    for Z in iter_realization_batches(terrain, grid, guard):
        acc |= watershed_batch(terrain, Z, targets).any(axis=0)
    return NodeSet.from_mask(acc)


def avws_lower_bound(terrain: ImpreciseTerrain, avoid, targets, grid: LevelGrid,
                     guard: int = DEFAULT_GUARD) -> NodeSet:
    """Union over grid realizations of the nodes whose water reaches
    ``targets`` without entering ``avoid``."""
    acc = np.zeros(terrain.n_nodes, dtype=bool)
    for Z in iter_realization_batches(terrain, grid, guard):
        acc |= watershed_batch(terrain, Z, targets, avoid=avoid).any(axis=0)
    return NodeSet.from_mask(acc)


def psws_upper_bound(terrain: ImpreciseTerrain, targets, grid: LevelGrid,
                     guard: int = DEFAULT_GUARD) -> NodeSet:
    """Nodes not seen escaping the grid potential watershed of ``targets``
    without passing through ``targets``.  Exact when the grid is rich enough."""
    pows = pows_lower_bound(terrain, targets, grid, guard).mask(terrain.n_nodes)
    out = np.flatnonzero(~pows)
    if out.size == 0:
        return NodeSet(range(terrain.n_nodes))
    esc = avws_lower_bound(terrain, targets, out, grid, guard).mask(terrain.n_nodes)
    return NodeSet.from_mask(~esc)


def podel_lower_bound(terrain: ImpreciseTerrain, sources, grid: LevelGrid,
                      guard: int = DEFAULT_GUARD) -> NodeSet:
    """Union of exact downstream sets of ``sources`` over all grid realizations."""
    acc = np.zeros(terrain.n_nodes, dtype=bool)
    for Z in iter_realization_batches(terrain, grid, guard):
        acc |= downstream_batch(terrain, Z, sources).any(axis=0)
    return NodeSet.from_mask(acc)


def verify_canonical_witness(terrain: ImpreciseTerrain, targets, result: ReachResult) -> bool:
    """Whether the realization given by ``result`` (upper bounds off the
    members) has exactly ``result.members`` as the watershed of ``targets``.

    Raises :class:`~impreciseflow.core.InvalidRealization` if that
    realization leaves an interval.
    """
    z = np.array(terrain.high)
    m = result.members.ids
    z[m] = result.elevation[m]
    check_realization(terrain, z)
    return watershed(terrain, z, targets) == result.members


def connected_subsets(terrain: ImpreciseTerrain, max_size: int | None = None,
                      limit: int = 200_000) -> list[NodeSet]:
    """All connected node sets up to ``max_size`` nodes (exhaustive)."""
    n = terrain.n_nodes
    cap = n if max_size is None else max_size
    seen: set[frozenset[int]] = {frozenset([v]) for v in range(n)}
    frontier = list(seen)
    out = list(seen)
    for _ in range(1, cap):
        nxt = []
        for r in frontier:
            for t in neighborhood(terrain, list(r)):
                g = r | {t}
                if g not in seen:
                    seen.add(g)
                    nxt.append(g)
                    if len(seen) > limit:
                        raise GuardExceeded(f"more than {limit} connected subsets")
        out.extend(nxt)
        frontier = nxt
    return sorted((NodeSet(s) for s in out), key=lambda s: (len(s), tuple(s.ids)))


def _traps(terrain: ImpreciseTerrain, s: NodeSet) -> bool:
    """Every realization has a local minimum inside ``s``: its lowest upper
    bound is below every outside neighbor's lower bound."""
    nb = neighborhood(terrain, s).ids
    return nb.size == 0 or terrain.high[s.ids].min() < terrain.low[nb].min()


def imprecise_minima_bruteforce(terrain: ImpreciseTerrain, max_size: int | None = None) -> list[NodeSet]:
    """Inclusion-minimal connected trapping sets, by scanning all connected
    subsets (ordered by smallest member)."""
    traps = [s for s in connected_subsets(terrain, max_size) if _traps(terrain, s)]
    minimal = [s for s in traps if not any(t < s for t in traps)]
    return sorted(minimal, key=lambda s: tuple(s.ids))


def _drains(terrain: ImpreciseTerrain, p: int, z: np.ndarray, q: int) -> np.ndarray:
    """For each row of ``z`` (full realizations), whether q is a
    steepest-descent neighbor of p."""
    a, b = terrain.indptr[p], terrain.indptr[p + 1]
    nb = terrain.indices[a:b]
    s = (z[:, [p]] - z[:, nb]) / terrain.distances[a:b]
    k = int(np.searchsorted(nb, q))
    return (s[:, k] >= 0) & (s[:, k] == s.max(axis=1))


def min_elev_scan(terrain: ImpreciseTerrain, p: int, q: int, z_q: float,
                  steps: int = 1000) -> float | None:
    """Lowest grid elevation of ``p`` (``steps`` equal intervals over its
    range) at which ``q`` at ``z_q`` is a steepest neighbor, others high."""
    zs = np.linspace(terrain.low[p], terrain.high[p], steps + 1)
    Z = np.tile(terrain.high, (zs.size, 1))
    Z[:, q] = z_q
    Z[:, p] = zs
    ok = _drains(terrain, p, Z, q)
    return float(zs[ok][0]) if ok.any() else None


def max_recv_scan(terrain: ImpreciseTerrain, q: int, z: float, p: int,
                  steps: int = 200) -> float | None:
    """Highest grid elevation of ``p`` at which ``q``, somewhere in
    ``[low(q), z]`` on a grid, has ``p`` as a steepest neighbor."""
    zq = np.linspace(terrain.low[q], z, steps + 1)
    zp = np.linspace(terrain.low[p], terrain.high[p], steps + 1)
    A, B = np.meshgrid(zq, zp, indexing="ij")
    Z = np.tile(terrain.high, (A.size, 1))
    Z[:, q] = A.ravel()
    Z[:, p] = B.ravel()
    ok = _drains(terrain, q, Z, p)
    return float(B.ravel()[ok].max()) if ok.any() else None
