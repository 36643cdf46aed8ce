"""Instance generators from the NP-hardness reductions.

* Graph 3-colourability to domain-based policy mining (``three_color_to_dbpm``)
* Graph 3-colourability to domain bounding (``three_color_to_db``)
* Domain bounding to DTE policy mining (``db_to_dtepm``)

The outputs are ordinary :class:`PartialMatrix` values, so the encoder,
solver and oracles consume them unchanged.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from pathlib import Path

import numpy as np

from .core import ONE, STAR, ZERO, PartialMatrix
from .errors import MatrixParseError, SizeLimitError

COLORING_LIMIT = 12


@dataclass(frozen=True)
class UndirectedGraph:
    """Simple graph on vertices ``0..n-1``; edges are ``(u, v)`` with ``u < v``.

    Edges keep their given order, which fixes the edge numbering used by the
    reductions.
    """

    n: int
    edges: tuple = ()

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        norm = []
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {(u, v)} out of range")
            e = (min(u, v), max(u, v))
            if e in norm:
                raise ValueError(f"duplicate edge {e}")
            norm.append(e)
        object.__setattr__(self, "edges", tuple(norm))

    @classmethod
    def complete(cls, n):
        return cls(n, tuple((u, v) for u in range(n) for v in range(u + 1, n)))

    @classmethod
    def from_networkx(cls, g):
        nodes = sorted(g.nodes())
        index = {v: i for i, v in enumerate(nodes)}
        return cls(len(nodes), tuple(sorted((index[u], index[v]) if index[u] < index[v]
                                            else (index[v], index[u]) for u, v in g.edges())))

    def ends(self, e):
        return self.edges[e]


def parse_graph(text: str) -> UndirectedGraph:
    """Read ``g <n>`` followed by ``e <u> <v>`` lines (``#`` comments allowed)."""
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        try:
            if toks[0] == "g" and len(toks) == 2 and n is None:
                n = int(toks[1])
            elif toks[0] == "e" and len(toks) == 3 and n is not None:
                edges.append((int(toks[1]), int(toks[2])))
            else:
                raise MatrixParseError(f"unexpected line {line!r}", lineno)
        except ValueError as exc:
            if isinstance(exc, MatrixParseError):
                raise
            raise MatrixParseError(str(exc), lineno) from None
    if n is None:
        raise MatrixParseError("missing 'g <n>' header", 1)
    try:
        return UndirectedGraph(n, tuple(edges))
    except ValueError as exc:
        raise MatrixParseError(str(exc)) from None


def format_graph(h: UndirectedGraph) -> str:
    return "".join([f"g {h.n}\n"] + [f"e {u} {v}\n" for u, v in h.edges])


def read_graph(path) -> UndirectedGraph:
    return parse_graph(Path(path).read_text())


def is_three_colorable(h: UndirectedGraph) -> bool:
    """Exhaustive search over all ``3**n`` colourings."""
    if h.n > COLORING_LIMIT:
        raise SizeLimitError(f"exhaustive colouring is limited to {COLORING_LIMIT} vertices")
    for coloring in product(range(3), repeat=h.n):
        if all(coloring[u] != coloring[v] for u, v in h.edges):
            return True
    return False


# --- 3-colourability -> DBPM ------------------------------------------------


@dataclass(frozen=True)
class DbpmLayout:
    """Entity and right numbering of a 3-colourability -> DBPM instance."""

    n_vertices: int
    n_edges: int

    def x(self, v, i):
        return 3 * v + i

    def y(self, v):
        return 3 * self.n_vertices + v

    def z(self, e, i):
        return 4 * self.n_vertices + 3 * e + i

    def a(self, v):
        return v

    def b(self, e):
        return self.n_vertices + e

    @property
    def n_entities(self):
        return 4 * self.n_vertices + 3 * self.n_edges

    @property
    def n_rights(self):
        return self.n_vertices + self.n_edges


def three_color_to_dbpm(h: UndirectedGraph):
    """Return ``(m, psm)`` with ``m = 3|V|``; ``psm`` admits at most ``m`` classes iff ``h`` is 3-colourable.

    Entities are ``x[v, i]`` (colour ``i`` for ``v``), then ``y[v]``, then
    ``z[e, i]``; rights are ``a[v]`` then ``b[e]``.  Cells not fixed below
    are ``*``.
    """
    L = DbpmLayout(h.n, len(h.edges))
    n, k = L.n_entities, L.n_rights
    if n == 0:
        raise ValueError("graph must have at least one vertex")
    cells = np.full((n, k, n), STAR, dtype=np.int8)
    V, E, C = range(h.n), range(len(h.edges)), range(3)

    for v in V:
        for i in C:
            cells[L.x(v, i), L.a(v), L.x(v, i)] = ONE
        cells[L.y(v), L.a(v), L.y(v)] = ONE
    for e in E:
        for i in C:
            cells[L.z(e, i), L.b(e), L.z(e, i)] = ONE

    for v in V:
        for u in V:
            if u == v:
                continue
            for i in C:
                cells[L.x(v, i), L.a(u), L.x(v, i)] = ZERO
            cells[L.y(v), L.a(u), L.y(v)] = ZERO
        for i in C:
            for j in C:
                if i != j:
                    cells[L.x(v, i), L.a(v), L.x(v, j)] = ZERO
    for e in E:
        ends = h.ends(e)
        for v in ends:
            cells[L.y(v), L.b(e), L.y(v)] = ZERO
        for i in C:
            for u in V:
                if u not in ends:
                    cells[L.z(e, i), L.a(u), L.z(e, i)] = ZERO
            for v in ends:
                for j in C:
                    if i != j:
                        cells[L.z(e, i), L.a(v), L.x(v, j)] = ZERO
                        cells[L.x(v, j), L.a(v), L.z(e, i)] = ZERO
    return 3 * h.n, PartialMatrix(cells)


# --- 3-colourability -> DB --------------------------------------------------


def db_base(h: UndirectedGraph, e: int) -> int:
    """Index of the first of the three rows belonging to edge ``e``."""
    return 3 + h.n + 3 * e


def three_color_to_db(h: UndirectedGraph):
    """Return ``(3, psm)``: ``psm`` (one right) has an instantiation with at most
    three distinct rows iff ``h`` is 3-colourable.

    Rows 0-2 are colour rows, then one row per vertex, then three rows per
    edge.  Vertex ``v`` owns column ``3 + v``; the last ``3|E|`` columns are 0.
    """
    size = 3 + h.n + 3 * len(h.edges)
    left = 3 + h.n
    cells = np.full((size, size), STAR, dtype=np.int8)
    cells[:, left:] = ZERO
    for i in range(3):
        cells[i, :3] = ZERO
        cells[i, i] = ONE
    for v in range(h.n):
        cells[3 + v, 3 + v] = ONE
    for e, (u, v) in enumerate(h.edges):
        base = db_base(h, e)
        for row, (cu, cv) in enumerate(((ONE, ZERO), (ZERO, ONE), (ZERO, ZERO)), start=base):
            cells[row, 3 + u] = cu
            cells[row, 3 + v] = cv
    return 3, PartialMatrix(cells)


# --- DB -> DTEPM ------------------------------------------------------------


def interlock_matrix(n: int) -> np.ndarray:
    """The fixed ``(2n+1) x (2n+1)`` block appended by ``db_to_dtepm``.

    Rows ``0..n-1`` carry ones at ``i`` and ``2n - i``, row ``n`` only at the
    centre, and row ``2n - j`` (``j < n``) is ones on ``j..2n-j``.  It has
    ``2n + 1`` distinct rows but only ``n + 1`` distinct columns.
    """
    size = 2 * n + 1
    out = np.zeros((size, size), dtype=np.int8)
    for i in range(n):
        out[i, i] = out[i, 2 * n - i] = 1
    out[n, n] = 1
    for j in range(n):
        out[2 * n - j, j : 2 * n - j + 1] = 1
    return out


def db_to_dtepm(m: int, psm: PartialMatrix):
    """Return ``(m + 2n + 1, psm')`` with ``psm' = [[psm, 0], [0, M*]]``."""
    if psm.k != 1:
        raise ValueError(f"db_to_dtepm needs a single right, got k={psm.k}")
    n = psm.n
    size = 3 * n + 1
    cells = np.full((size, size), ZERO, dtype=np.int8)
    cells[:n, :n] = psm.cells[:, 0, :]
    cells[n:, n:] = interlock_matrix(n)
    return m + 2 * n + 1, PartialMatrix(cells)
