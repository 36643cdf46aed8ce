"""Digraphs, partially specified access matrices, and their file formats.

Entities, rights and domains are dense integer indices.  A digraph is an
``n x k x n`` boolean array ``adj`` with ``adj[u, a, v]`` true iff entity
``u`` may exercise right ``a`` over entity ``v``.  A partial matrix uses
the cell values ``ONE``, ``ZERO`` and ``STAR`` (don't care).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import ArityError, MatrixParseError

ZERO = 0
ONE = 1
STAR = -1

_CELL_TOKENS = {"0": ZERO, "1": ONE, "*": STAR}
_CELL_CHARS = {ZERO: "0", ONE: "1", STAR: "*"}


def _frozen(arr):
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


class Digraph:
    """Edge-labelled digraph over ``n`` entities and ``k`` rights.

    Stored as a read-only bitset cube; the triple set is derived on demand.
    """

    __slots__ = ("adj", "__dict__")

    def __init__(self, n: int, k: int, edges=()):
        if n < 1 or k < 1:
            raise ValueError(f"need n >= 1 and k >= 1, got n={n}, k={k}")
        adj = np.zeros((n, k, n), dtype=bool)
        for u, a, v in edges:
            if not (0 <= u < n and 0 <= a < k and 0 <= v < n):
                raise ValueError(f"edge {(u, a, v)} out of range for n={n}, k={k}")
            adj[u, a, v] = True
        adj.setflags(write=False)
        self.adj = adj

    @classmethod
    def from_array(cls, adj) -> "Digraph":
        adj = np.asarray(adj)
        if adj.ndim == 2:
            adj = adj[:, None, :]
        if adj.ndim != 3 or adj.shape[0] != adj.shape[2]:
            raise ArityError(f"expected an n x k x n array, got shape {adj.shape}")
        g = cls.__new__(cls)
        if adj.shape[0] < 1 or adj.shape[1] < 1:
            raise ValueError("need n >= 1 and k >= 1")
        g.adj = _frozen(adj.astype(bool))
        return g

    @property
    def n(self) -> int:
        return self.adj.shape[0]

    @property
    def k(self) -> int:
        return self.adj.shape[1]

    @cached_property
    def edges(self) -> frozenset:
        return frozenset(map(tuple, np.argwhere(self.adj).tolist()))

    def has_edge(self, u, a, v) -> bool:
        return bool(self.adj[u, a, v])

    def induced(self, vertices) -> "Digraph":
        """Subgraph induced by ``vertices``, relabelled in the given order."""
        idx = np.asarray(list(vertices), dtype=int)
        return Digraph.from_array(self.adj[np.ix_(idx, np.arange(self.k), idx)])

    def __eq__(self, other):
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.adj.shape == other.adj.shape and bool(np.array_equal(self.adj, other.adj))

    def __hash__(self):
        return hash((self.adj.shape, self.adj.tobytes()))

    def __repr__(self):
        return f"Digraph(n={self.n}, k={self.k}, edges={len(self.edges)})"


class PartialMatrix:
    """An ``n x k x n`` access matrix whose cells are ``ONE``, ``ZERO`` or ``STAR``."""

    __slots__ = ("cells", "entity_names", "right_names", "__dict__")

    def __init__(self, cells, entity_names=None, right_names=None):
        cells = np.asarray(cells)
        if cells.ndim == 2:
            cells = cells[:, None, :]
        if cells.ndim != 3 or cells.shape[0] != cells.shape[2]:
            raise ArityError(f"expected an n x k x n array, got shape {cells.shape}")
        n, k, _ = cells.shape
        if n < 1 or k < 1:
            raise ValueError(f"need n >= 1 and k >= 1, got n={n}, k={k}")
        cells = cells.astype(np.int8)
        bad = ~np.isin(cells, (ZERO, ONE, STAR))
        if bad.any():
            raise ValueError(f"cell values must be 0, 1 or {STAR}")
        self.cells = _frozen(cells)
        if entity_names is not None and len(entity_names) != n:
            raise ArityError("entity name table must have n entries")
        if right_names is not None and len(right_names) != k:
            raise ArityError("right name table must have k entries")
        self.entity_names = tuple(entity_names) if entity_names is not None else None
        self.right_names = tuple(right_names) if right_names is not None else None

    @classmethod
    def full(cls, n, k, value=STAR) -> "PartialMatrix":
        return cls(np.full((n, k, n), value, dtype=np.int8))

    @classmethod
    def from_digraph(cls, g: Digraph) -> "PartialMatrix":
        return cls(g.adj.astype(np.int8))

    @property
    def n(self) -> int:
        return self.cells.shape[0]

    @property
    def k(self) -> int:
        return self.cells.shape[1]

    @cached_property
    def star_cells(self) -> np.ndarray:
        """Star cells as an ``(s, 3)`` array in row-major ``(u, a, v)`` order."""
        out = np.argwhere(self.cells == STAR)
        out.setflags(write=False)
        return out

    @property
    def n_stars(self) -> int:
        return len(self.star_cells)

    def is_complete(self) -> bool:
        return self.n_stars == 0

    def to_digraph(self) -> Digraph:
        if not self.is_complete():
            raise ValueError(f"matrix has {self.n_stars} unspecified cells")
        return Digraph.from_array(self.cells == ONE)

    def fill_constant(self, value: bool) -> Digraph:
        """Instantiation replacing every star with ``value``."""
        return Digraph.from_array(np.where(self.cells == STAR, bool(value), self.cells == ONE))

    def agrees_with(self, g: Digraph) -> bool:
        """True iff ``g`` is an instantiation of this matrix."""
        if g.adj.shape != self.cells.shape:
            return False
        fixed = self.cells != STAR
        return bool(np.array_equal(g.adj[fixed], self.cells[fixed] == ONE))

    def __eq__(self, other):
        if not isinstance(other, PartialMatrix):
            return NotImplemented
        return (
            self.cells.shape == other.cells.shape
            and bool(np.array_equal(self.cells, other.cells))
            and self.entity_names == other.entity_names
            and self.right_names == other.right_names
        )

    def __hash__(self):
        return hash((self.cells.shape, self.cells.tobytes()))

    def __repr__(self):
        return f"PartialMatrix(n={self.n}, k={self.k}, stars={self.n_stars})"


@dataclass(frozen=True)
class DomainPolicy:
    """Summary digraph over domains plus the entity-to-domain assignment."""

    summary: Digraph
    assignment: tuple = field()

    def __post_init__(self):
        assignment = tuple(int(p) for p in self.assignment)
        object.__setattr__(self, "assignment", assignment)
        m = self.summary.n
        for p in assignment:
            if not 0 <= p < m:
                raise ValueError(f"domain index {p} outside [0, {m})")

    @property
    def n_domains(self) -> int:
        return self.summary.n

    @property
    def k(self) -> int:
        return self.summary.k

    def grants(self, u, a, v) -> bool:
        return self.summary.has_edge(self.assignment[u], a, self.assignment[v])

    def expand(self) -> Digraph:
        """The digraph this policy induces on its entities."""
        pi = np.asarray(self.assignment)
        return Digraph.from_array(self.summary.adj[np.ix_(pi, np.arange(self.k), pi)])

    def to_dict(self) -> dict:
        return {
            "domains": self.n_domains,
            "rights": self.k,
            "assignment": list(self.assignment),
            "summary_edges": [list(e) for e in sorted(self.summary.edges)],
        }

    @classmethod
    def from_dict(cls, doc) -> "DomainPolicy":
        summary = Digraph(doc["domains"], doc.get("rights", 1), map(tuple, doc["summary_edges"]))
        return cls(summary, doc["assignment"])

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def instantiate(psm: PartialMatrix, fill) -> Digraph:
    """Replace the star cells of ``psm`` (row-major order) with ``fill``."""
    fill = np.asarray(fill, dtype=bool).ravel()
    if len(fill) != psm.n_stars:
        raise ArityError(f"fill has {len(fill)} entries, matrix has {psm.n_stars} stars")
    adj = psm.cells == ONE
    if len(fill):
        u, a, v = psm.star_cells.T
        adj[u, a, v] = fill
    return Digraph.from_array(adj)


def enforces(policy: DomainPolicy, g: Digraph) -> bool:
    """True iff ``policy`` grants exactly the edges of ``g``.

    Equivalently, the assignment is a strong homomorphism onto the summary.
    """
    if len(policy.assignment) != g.n or policy.k != g.k:
        raise ArityError(
            f"policy covers {len(policy.assignment)} entities / {policy.k} rights, "
            f"digraph has {g.n} / {g.k}"
        )
    return bool(np.array_equal(policy.expand().adj, g.adj))


# --- matrix files -------------------------------------------------------------


def _parse_int(tok, lineno, what):
    try:
        return int(tok)
    except ValueError:
        raise MatrixParseError(f"{what} must be an integer, got {tok!r}", lineno) from None


def parse_matrix(text: str) -> PartialMatrix:
    n = k = None
    default = None
    cells = None
    seen = set()
    entity_names = right_names = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if n is None:
            if toks[0] != "psm" or len(toks) != 3:
                raise MatrixParseError("header must be 'psm <n> <k>'", lineno)
            n = _parse_int(toks[1], lineno, "n")
            k = _parse_int(toks[2], lineno, "k")
            if n < 1:
                raise MatrixParseError(f"n must be >= 1, got {n}", lineno)
            if k < 1:
                raise MatrixParseError(f"k must be >= 1, got {k}", lineno)
            continue
        if toks[0] == "default":
            if seen or default is not None or len(toks) != 2 or toks[1] not in _CELL_TOKENS:
                raise MatrixParseError("'default <0|1|*>' must precede all cell lines", lineno)
            default = _CELL_TOKENS[toks[1]]
            continue
        if toks[0] in ("entities", "rights"):
            names = tuple(toks[1:])
            if len(names) != (n if toks[0] == "entities" else k):
                raise MatrixParseError(f"{toks[0]} table has wrong length", lineno)
            if toks[0] == "entities":
                entity_names = names
            else:
                right_names = names
            continue
        if cells is None:
            cells = np.full((n, k, n), 2, dtype=np.int8)  # 2 marks "unlisted"
        if len(toks) != 4:
            raise MatrixParseError("cell line must be '<u> <a> <v> <0|1|*>'", lineno)
        u = _parse_int(toks[0], lineno, "u")
        a = _parse_int(toks[1], lineno, "a")
        v = _parse_int(toks[2], lineno, "v")
        if not (0 <= u < n and 0 <= a < k and 0 <= v < n):
            raise MatrixParseError(f"cell {(u, a, v)} out of range", lineno)
        if toks[3] not in _CELL_TOKENS:
            raise MatrixParseError(f"cell value must be 0, 1 or *, got {toks[3]!r}", lineno)
        if (u, a, v) in seen:
            raise MatrixParseError(f"duplicate cell {(u, a, v)}", lineno)
        seen.add((u, a, v))
        cells[u, a, v] = _CELL_TOKENS[toks[3]]
    if n is None:
        raise MatrixParseError("missing 'psm <n> <k>' header", 1)
    if cells is None:
        cells = np.full((n, k, n), 2, dtype=np.int8)
    unlisted = cells == 2
    if unlisted.any():
        if default is None:
            raise MatrixParseError(
                f"{int(unlisted.sum())} cells unlisted and no 'default' line"
            )
        cells[unlisted] = default
    return PartialMatrix(cells, entity_names, right_names)


def format_matrix(psm: PartialMatrix) -> str:
    lines = [f"psm {psm.n} {psm.k}", "default *"]
    if psm.entity_names is not None:
        lines.append("entities " + " ".join(psm.entity_names))
    if psm.right_names is not None:
        lines.append("rights " + " ".join(psm.right_names))
    for u, a, v in np.argwhere(psm.cells != STAR).tolist():
        lines.append(f"{u} {a} {v} {_CELL_CHARS[int(psm.cells[u, a, v])]}")
    return "\n".join(lines) + "\n"


def read_matrix(path) -> PartialMatrix:
    return parse_matrix(Path(path).read_text())


def write_matrix(psm: PartialMatrix, path) -> None:
    Path(path).write_text(format_matrix(psm))
