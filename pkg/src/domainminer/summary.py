"""Indistinguishability of entities and construction of the minimal summary."""
from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .core import Digraph, DomainPolicy
from .errors import SizeLimitError

#: Largest digraph accepted by the exponential-time summary check.
SUMMARY_CHECK_LIMIT = 10


class UnionFind:
    """Disjoint sets over ``0..n-1`` with union by rank and path compression."""

    def __init__(self, n):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return rx
        if self.rank[rx] < self.rank[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        if self.rank[rx] == self.rank[ry]:
            self.rank[rx] += 1
        return rx


@dataclass(frozen=True)
class EquivalencePartition:
    """Indistinguishability classes; each class is represented by its minimum entity."""

    representative: tuple
    classes: tuple

    @classmethod
    def from_labels(cls, labels) -> "EquivalencePartition":
        groups = {}
        for u, lab in enumerate(labels):
            groups.setdefault(lab, []).append(u)
        classes = tuple(sorted(tuple(c) for c in groups.values()))
        rep = [0] * len(labels)
        for c in classes:
            for u in c:
                rep[u] = c[0]
        return cls(tuple(rep), classes)

    @property
    def n_classes(self) -> int:
        return len(self.classes)


def _check_vertex(g, u):
    if not 0 <= u < g.n:
        raise IndexError(f"entity {u} outside [0, {g.n})")


def indistinguishable(g: Digraph, u: int, v: int) -> bool:
    """Whether ``u`` and ``v`` have identical labelled adjacencies in ``g``.

    For every right: the four edges among ``{u, v}`` are all present or all
    absent, and every third vertex sees ``u`` and ``v`` alike in both
    directions.  Linear in ``k * n``.
    """
    _check_vertex(g, u)
    _check_vertex(g, v)
    if u == v:
        return True
    adj = g.adj
    pair = [u, v]
    block = adj[pair][:, :, pair]
    if not np.array_equal(block.all(axis=(0, 2)), block.any(axis=(0, 2))):
        return False
    out_diff = adj[u] != adj[v]
    out_diff[:, pair] = False
    if out_diff.any():
        return False
    in_diff = adj[:, :, u] != adj[:, :, v]
    in_diff[pair, :] = False
    return not in_diff.any()


def adjacency(g: Digraph, u: int, v: int) -> frozenset:
    """Signed right set ``{(+1, a)}`` for edges ``u -a-> v`` and ``{(-1, a)}`` for ``v -a-> u``."""
    _check_vertex(g, u)
    _check_vertex(g, v)
    fwd = np.flatnonzero(g.adj[u, :, v])
    bwd = np.flatnonzero(g.adj[v, :, u])
    return frozenset([(1, int(a)) for a in fwd] + [(-1, int(a)) for a in bwd])


def summarize(g: Digraph, n_jobs: int = 1):
    """Compute the summary of ``g`` and the strong homomorphism onto it.

    Returns ``(policy, partition)``.  The summary is the subgraph induced by
    the class representatives (minimum entity of each class), with domains
    numbered in increasing representative order.

    With ``n_jobs > 1`` the pairwise tests are sharded across threads that
    read ``g`` and merge into a shared, locked union-find; the partition is
    identical to the sequential one.
    """
    n = g.n
    uf = UnionFind(n)
    if n_jobs <= 1:
        for u, v in combinations(range(n), 2):
            if uf.find(u) != uf.find(v) and indistinguishable(g, u, v):
                uf.union(u, v)
    else:
        lock = threading.Lock()
        pairs = list(combinations(range(n), 2))

        def work(chunk):
            for u, v in chunk:
                with lock:
                    if uf.find(u) == uf.find(v):
                        continue
                if indistinguishable(g, u, v):
                    with lock:
                        uf.union(u, v)

        chunks = [pairs[i::n_jobs] for i in range(n_jobs)]
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            list(pool.map(work, chunks))

    partition = EquivalencePartition.from_labels([uf.find(u) for u in range(n)])
    reps = [c[0] for c in partition.classes]
    index = {r: p for p, r in enumerate(reps)}
    assignment = [index[partition.representative[u]] for u in range(n)]
    return DomainPolicy(g.induced(reps), assignment), partition


def is_irreducible(h: Digraph) -> bool:
    """No two distinct vertices of ``h`` are indistinguishable."""
    return not any(indistinguishable(h, p, q) for p, q in combinations(range(h.n), 2))


def find_strong_homomorphism(g: Digraph, h: Digraph, surjective: bool = False):
    """Backtracking search for a strong homomorphism ``g -> h``.

    Returns the vertex map as a tuple, or ``None``.  Exponential; for small inputs.
    """
    if g.k != h.k:
        return None
    n, m = g.n, h.n
    gadj, hadj = g.adj, h.adj
    pi = [-1] * n
    used = [0] * m

    def consistent(u, p):
        if not np.array_equal(gadj[u, :, u], hadj[p, :, p]):
            return False
        for w in range(u):
            q = pi[w]
            if not np.array_equal(gadj[u, :, w], hadj[p, :, q]):
                return False
            if not np.array_equal(gadj[w, :, u], hadj[q, :, p]):
                return False
        return True

    def search(u, n_used):
        if surjective and m - n_used > n - u:
            return False
        if u == n:
            return True
        for p in range(m):
            if consistent(u, p):
                pi[u] = p
                used[p] += 1
                if search(u + 1, n_used + (used[p] == 1)):
                    return True
                used[p] -= 1
                pi[u] = -1
        return False

    return tuple(pi) if search(0, 0) else None


def is_summary_of(h: Digraph, g: Digraph) -> bool:
    """Exhaustive check that ``h`` is a summary of ``g``.

    A surjective strong homomorphism ``g -> h`` must exist and ``h`` must be
    irreducible.  Limited to ``SUMMARY_CHECK_LIMIT`` vertices.
    """
    if max(g.n, h.n) > SUMMARY_CHECK_LIMIT:
        raise SizeLimitError(
            f"is_summary_of is exponential; limit is {SUMMARY_CHECK_LIMIT} vertices"
        )
    if h.n > g.n or h.k != g.k:
        return False
    if not is_irreducible(h):
        return False
    return find_strong_homomorphism(g, h, surjective=True) is not None
