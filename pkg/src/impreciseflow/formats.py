"""Text formats for terrains and results.

``.itg`` stores a general terrain (positions, intervals, edge list);
``.igr`` stores a raster with D8 adjacency.  Numbers are written as the
shortest decimal that reads back to the same binary64 value, with a
trailing ``.0`` dropped, so files are byte-stable across platforms.
"""

from __future__ import annotations

import math
from typing import Iterable

import numpy as np

from .core import ImpreciseTerrain, NodeSet, grid_terrain, validate

__all__ = [
    "FormatError",
    "ValidationError",
    "format_number",
    "parse_itg",
    "write_itg",
    "parse_igr",
    "write_igr",
    "parse_terrain",
    "write_terrain",
    "parse_realization",
    "write_nodeset",
    "parse_nodeset",
    "write_realization",
    "write_minima",
    "write_mask",
]


class FormatError(ValueError):
    """Malformed input; ``line`` and ``column`` are 1-based."""

    def __init__(self, message: str, line: int, column: int = 1):
        self.line, self.column = line, column
        super().__init__(f"line {line}, column {column}: {message}")


class ValidationError(ValueError):
    """Well-formed input describing an invalid terrain."""

    def __init__(self, violations):
        self.violations = violations
        super().__init__("; ".join(v.message for v in violations))


def format_number(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x!r}")
    if x == 0:
        return "0"
    s = repr(x)
    return s[:-2] if s.endswith(".0") else s


class _Lines:
    """Cursor over the lines of a text file with located errors."""

    def __init__(self, text: str):
        self.lines = text.split("\n")
        if self.lines and self.lines[-1] == "":
            self.lines.pop()
        self.i = 0

    def next(self, what: str) -> list[str]:
        if self.i >= len(self.lines):
            raise FormatError(f"unexpected end of file, expected {what}", self.i + 1)
        line = self.lines[self.i]
        self.i += 1
        if line.endswith("\r"):
            line = line[:-1]
        return line.split()

    def column(self, fields: list[str], k: int) -> int:
        line = self.lines[self.i - 1]
        pos = 0
        for f in fields[:k]:
            pos = line.index(f, pos) + len(f)
        return line.index(fields[k], pos) + 1 if k < len(fields) else len(line) + 1

    def fail(self, fields, k, message):
        raise FormatError(message, self.i, self.column(fields, k))

    def number(self, fields, k, kind=float):
        if k >= len(fields):
            self.fail(fields, k, "missing value")
        try:
            v = kind(fields[k])
        except ValueError:
            self.fail(fields, k, f"not a valid {'integer' if kind is int else 'number'}: {fields[k]!r}")
        if kind is float and not math.isfinite(v):
            self.fail(fields, k, f"non-finite value {fields[k]!r}")
        return v

    def header(self, words: list[str], what: str) -> list[str]:
        f = self.next(what)
        for k, w in enumerate(words):
            if w is not None and (k >= len(f) or f[k] != w):
                self.fail(f, k, f"expected {w!r}")
        return f

    def width(self, fields, n):
        if len(fields) != n:
            self.fail(fields, min(len(fields), n), f"expected {n} fields, found {len(fields)}")

    def end(self):
        while self.i < len(self.lines):
            f = self.next("end of file")
            if f:
                self.fail(f, 0, "unexpected trailing content")


def _checked(t: ImpreciseTerrain) -> ImpreciseTerrain:
    v = validate(t)
    if v:
        raise ValidationError(v)
    return t


def parse_itg(text: str) -> ImpreciseTerrain:
    src = _Lines(text)
    f = src.header(["itg", "1"], "header 'itg 1'")
    src.width(f, 2)
    f = src.header(["nodes", None], "'nodes N'")
    src.width(f, 2)
    n = src.number(f, 1, int)
    if n < 0:
        src.fail(f, 1, "node count must be non-negative")
    pos = np.empty((n, 2))
    lo = np.empty(n)
    hi = np.empty(n)
    for v in range(n):
        f = src.next(f"node {v}")
        src.width(f, 5)
        if src.number(f, 0, int) != v:
            src.fail(f, 0, f"expected node id {v}")
        pos[v] = src.number(f, 1), src.number(f, 2)
        lo[v], hi[v] = src.number(f, 3), src.number(f, 4)
    f = src.header(["edges", None], "'edges M'")
    src.width(f, 2)
    m = src.number(f, 1, int)
    if m < 0:
        src.fail(f, 1, "edge count must be non-negative")
    edges = np.empty((m, 2), dtype=np.int64)
    prev = None
    for k in range(m):
        f = src.next(f"edge {k}")
        src.width(f, 2)
        u, w = src.number(f, 0, int), src.number(f, 1, int)
        for c, x in ((0, u), (1, w)):
            if not 0 <= x < n:
                src.fail(f, c, f"node id {x} outside 0..{n - 1}")
        if u >= w:
            src.fail(f, 0, "edge endpoints must satisfy u < v")
        if prev is not None and (u, w) <= prev:
            src.fail(f, 0, "edges must be sorted and unique")
        prev = (u, w)
        edges[k] = u, w
    src.end()
    return _checked(ImpreciseTerrain(pos, lo, hi, edges))


def write_itg(terrain: ImpreciseTerrain) -> str:
    fn = format_number
    out = ["itg 1", f"nodes {terrain.n_nodes}"]
    for v in range(terrain.n_nodes):
        x, y = terrain.positions[v]
        out.append(f"{v} {fn(x)} {fn(y)} {fn(terrain.low[v])} {fn(terrain.high[v])}")
    e = np.sort(terrain.edges, axis=1)
    e = e[np.lexsort((e[:, 1], e[:, 0]))] if len(e) else e
    out.append(f"edges {len(e)}")
    out.extend(f"{u} {v}" for u, v in e.tolist())
    return "\n".join(out) + "\n"


def parse_igr(text: str) -> ImpreciseTerrain:
    src = _Lines(text)
    f = src.header(["igr", "1"], "header 'igr 1'")
    src.width(f, 2)
    f = src.header(["ncols", None, "nrows", None, "cellsize", None], "grid dimensions")
    src.width(f, 6)
    w, h = src.number(f, 1, int), src.number(f, 3, int)
    c = src.number(f, 5)
    if w <= 0:
        src.fail(f, 1, "ncols must be positive")
    if h <= 0:
        src.fail(f, 3, "nrows must be positive")
    if c <= 0:
        src.fail(f, 5, "cellsize must be positive")
    rasters = []
    for name in ("low", "high"):
        f = src.header([name], f"'{name}'")
        src.width(f, 1)
        r = np.empty((h, w))
        for i in range(h):
            f = src.next(f"{name} row {i}")
            if len(f) != w:
                src.fail(f, min(len(f), w), f"expected {w} values in {name} row {i}, found {len(f)}")
            r[i] = [src.number(f, k) for k in range(w)]
        rasters.append(r)
    src.end()
    return _checked(grid_terrain(rasters[0], rasters[1], c))


def write_igr(terrain: ImpreciseTerrain) -> str:
    if terrain.grid_shape is None:
        raise ValueError("terrain is not a grid")
    h, w = terrain.grid_shape
    fn = format_number
    out = ["igr 1", f"ncols {w} nrows {h} cellsize {fn(terrain.cellsize)}"]
    for name, arr in (("low", terrain.low), ("high", terrain.high)):
        out.append(name)
        for row in arr.reshape(h, w):
            out.append(" ".join(fn(x) for x in row))
    return "\n".join(out) + "\n"


def parse_terrain(text: str, fmt: str) -> ImpreciseTerrain:
    return {"itg": parse_itg, "igr": parse_igr}[fmt](text)


def write_terrain(terrain: ImpreciseTerrain, fmt: str) -> str:
    return {"itg": write_itg, "igr": write_igr}[fmt](terrain)


def write_nodeset(nodes: Iterable[int]) -> str:
    ids = NodeSet(nodes).ids.tolist()
    return "\n".join([f"nodeset {len(ids)}", *map(str, ids)]) + "\n"


def parse_nodeset(text: str) -> NodeSet:
    src = _Lines(text)
    f = src.header(["nodeset", None], "'nodeset K'")
    k = src.number(f, 1, int)
    ids = []
    for _ in range(k):
        f = src.next("node id")
        src.width(f, 1)
        ids.append(src.number(f, 0, int))
    src.end()
    return NodeSet(ids)


def write_realization(z) -> str:
    z = np.asarray(z, dtype=np.float64)
    lines = [f"realization {z.size}"]
    lines.extend(f"{v} {format_number(x)}" for v, x in enumerate(z.tolist()))
    return "\n".join(lines) + "\n"


def parse_realization(text: str, n: int | None = None) -> np.ndarray:
    src = _Lines(text)
    f = src.header(["realization", None], "'realization N'")
    src.width(f, 2)
    k = src.number(f, 1, int)
    if n is not None and k != n:
        src.fail(f, 1, f"realization has {k} nodes, terrain has {n}")
    z = np.empty(k)
    for v in range(k):
        f = src.next(f"elevation of node {v}")
        src.width(f, 2)
        if src.number(f, 0, int) != v:
            src.fail(f, 0, f"expected node id {v}")
        z[v] = src.number(f, 1)
    src.end()
    return z


def write_minima(proxies, minima) -> str:
    pairs = sorted(zip((int(p) for p in proxies), minima))
    lines = [f"minima {len(pairs)}"]
    for p, m in pairs:
        lines.append(f"proxy {p} : members " + " ".join(map(str, NodeSet(m))))
    return "\n".join(lines) + "\n"


def write_mask(terrain: ImpreciseTerrain, nodes) -> str:
    if terrain.grid_shape is None:
        raise ValueError("mask output needs a grid terrain")
    h, w = terrain.grid_shape
    m = NodeSet(nodes).mask(terrain.n_nodes).reshape(h, w)
    rows = [" ".join("1" if x else "0" for x in r) for r in m]
    return "\n".join([f"mask {w} {h}", *rows]) + "\n"
