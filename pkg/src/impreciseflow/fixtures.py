"""Small named terrains and random terrain generators.

The named terrains are hand-built instances with known answers; they back
the test suite, the demos and the golden files.  Each returns the terrain
together with a dict mapping node labels to ids.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import Delaunay

from .core import ImpreciseTerrain, grid_terrain

__all__ = [
    "chain_pit",
    "fork",
    "flat_pair",
    "spurious_pit",
    "w_chain",
    "valley",
    "disconnected_persistent",
    "counter_nesting",
    "two_basin_grid",
    "random_terrain",
    "random_grid",
    "named_fixtures",
]


def _build(rows, edges):
    """``rows`` is a list of ``(label, x, y, low, high)``; edges use labels."""
    ids = {s[0]: i for i, s in enumerate(rows)}
    pos = [(s[1], s[2]) for s in rows]
    lo = [s[3] for s in rows]
    hi = [s[4] for s in rows]
    e = [(ids[u], ids[v]) for u, v in edges]
    return ImpreciseTerrain(pos, lo, hi, e), ids


def chain_pit():
    """a[5,5] - b[2,4] - c[0,1] on a unit-spaced line; c is the only pit."""
    return _build([("a", 0, 0, 5, 5), ("b", 1, 0, 2, 4), ("c", 2, 0, 0, 1)],
                  [("a", "b"), ("b", "c")])


def fork():
    """Exact terrain: a(2) next to b(0) and c(1), both at distance 1."""
    return _build([("a", 0, 0, 2, 2), ("b", 1, 0, 0, 0), ("c", 0, 1, 1, 1)],
                  [("a", "b"), ("a", "c")])


def flat_pair():
    """x[4,5] - a[0,2] - b[0,3] - y[4,6].  {a, b} traps water in every
    realization, but neither node does on its own."""
    return _build([("x", 0, 0, 4, 5), ("a", 1, 0, 0, 2), ("b", 2, 0, 0, 3), ("y", 3, 0, 4, 6)],
                  [("x", "a"), ("a", "b"), ("b", "y")])


def spurious_pit():
    """A slope whose all-low realization has a pit at n2 that no imprecise
    minimum backs: n2 can always be raised above n1."""
    rows = [("n0", 0, 0, 0, 0), ("n1", 1, 0, 2, 4), ("n2", 2, 0, 1.5, 5),
            ("n3", 3, 0, 3, 6), ("n4", 4, 0, 7, 7)]
    return _build(rows, [("n0", "n1"), ("n1", "n2"), ("n2", "n3"), ("n3", "n4")])


def w_chain(apex=(1.0, 9.0)):
    """Five nodes l - p1 - m - p2 - r with fixed pits p1, p2 and an
    imprecise apex m that can drain either way."""
    rows = [("l", 0, 0, 5, 5), ("p1", 1, 0, 0, 0), ("m", 2, 0, apex[0], apex[1]),
            ("p2", 3, 0, 0, 0), ("r", 4, 0, 5, 5)]
    return _build(rows, [("l", "p1"), ("p1", "m"), ("m", "p2"), ("p2", "r")])


def valley(n: int = 6):
    """q[0,2] at the bottom of a zig-zagging slope v1..vn.  Intervals
    overlap so every vi can be a local minimum or drain into one, yet no
    water can leave the valley: lows alternate up and down, highs are
    lows + 2.5."""
    rows = [("q", 0, 0, 0, 2)]
    for i in range(1, n + 1):
        lo = 1.0 + 0.5 * i + (0.5 if i % 2 else -0.5)
        rows.append((f"v{i}", i, 0, lo, lo + 2.5))
    labels = [s[0] for s in rows]
    return _build(rows, list(zip(labels, labels[1:])))


def disconnected_persistent():
    """A regular terrain whose persistent watershed of e has two components.

    Unit edges except d-e of length 1.6.  a, a_out and e_out are fixed
    sinks at the rim, b is fixed at 3, c in [2, 4], d in [2, 7], e at 1.
    d drains to e only while d is below 4 and to b once d passes 19/3, so
    d is uncertain while c, sitting behind d, always follows it into e.
    """
    rows = [("a", -1, 0, 0, 0), ("b", 0, 0, 3, 3), ("c", -1, 1, 2, 4), ("d", 0, 1, 2, 7),
            ("e", 1.6, 1, 1, 1), ("a_out", -2, 0, -10, -10), ("e_out", 2.6, 1, -10, -10)]
    edges = [("a", "b"), ("b", "d"), ("c", "d"), ("d", "e"), ("a", "a_out"), ("e", "e_out")]
    return _build(rows, edges)


def counter_nesting():
    """Potential watersheds of p and q nest but their persistent ones do not.

    p, s, r, t form a unit square; q hangs one unit below p and w sits 0.5
    from q.  p, q and r are imprecise, the rest fixed.

    PoWS(p) = {p,q,r,s,t,v,w}   PsWS(p) = {p,s,v}
    PoWS(q) = {p,q,s,v,w}       PsWS(q) = {p,q,v}
    """
    return _build([
        ("p", 0, 0, -1, 4), ("q", 0, -1, 3, 10), ("r", 1, 1, 2, 9),
        ("s", 0, 1, 7, 7), ("t", 1, 0, 5, 5), ("t'", 2, 0, 3, 3),
        ("u", 1.2, -0.98, 0, 0), ("v", -1, 0, 11, 11), ("w", 0.3, -1.4, 7, 7),
    ], [("p", "q"), ("p", "s"), ("p", "t"), ("p", "v"), ("q", "w"),
        ("r", "s"), ("r", "t"), ("t", "u"), ("u", "w"), ("t", "t'")])


def two_basin_grid():
    """7 x 5 D8 grid with two fixed pits and an imprecise saddle column."""
    x = np.arange(7.0)
    base = np.minimum(np.abs(x - 1.0), np.abs(x - 5.0)) * 2.0
    rows = np.array([1.5, 0.5, 0.0, 0.5, 1.5])
    low = base[None, :] + rows[:, None]
    high = low.copy()
    high[:, 2:5] += np.array([1.5, 4.0, 1.5])
    low[:, 3] -= 1.5
    low[2, 1] = high[2, 1] = -1.0
    low[2, 5] = high[2, 5] = -1.0
    return grid_terrain(low, high), {"p1": 2 * 7 + 1, "p2": 2 * 7 + 5}


def random_terrain(rng: np.random.Generator, n_max: int = 50) -> ImpreciseTerrain:
    """Delaunay graph on 3..n_max random points with random intervals.

    Mixes continuous intervals, small-integer intervals (many ties and
    flats) and slope-aligned intervals with some exact nodes.
    """
    n = int(rng.integers(3, n_max + 1))
    pts = rng.random((n, 2)) * 10
    if rng.random() < 0.3:
        pts = np.round(pts) + rng.random((n, 2)) * 1e-3
    edges = set()
    for s in Delaunay(pts).simplices:
        for i in range(3):
            a, b = sorted((int(s[i]), int(s[(i + 1) % 3])))
            edges.add((a, b))
    mode = rng.integers(3)
    if mode == 0:
        lo, w = rng.random(n) * 10, rng.random(n) * 3
    elif mode == 1:
        lo, w = rng.integers(0, 6, n).astype(float), rng.integers(0, 3, n).astype(float)
    else:
        lo = pts[:, 0] + rng.random(n) * 2
        w = rng.random(n) * 4 * (rng.random(n) < 0.5)
    return ImpreciseTerrain(pts, lo, lo + w, sorted(edges))


def random_grid(rng: np.random.Generator, shape=(6, 6)) -> ImpreciseTerrain:
    """D8 grid with random intervals, integer-valued half the time."""
    if rng.random() < 0.5:
        lo = rng.integers(0, 8, shape).astype(float)
    else:
        lo = rng.random(shape) * 5
    if rng.random() < 0.5:
        w = rng.integers(0, 3, shape).astype(float)
    else:
        w = rng.random(shape) * 2
    return grid_terrain(lo, lo + w)


def named_fixtures() -> dict[str, tuple[ImpreciseTerrain, dict[str, int]]]:
    """Every named fixture, keyed by function name."""
    out = {}
    for f in (chain_pit, fork, flat_pair, spurious_pit, w_chain, valley,
              disconnected_persistent, counter_nesting, two_basin_grid):
        try:
            out[f.__name__] = f()
        except NotImplementedError:
            pass
    return out
