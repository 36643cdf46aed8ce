"""Brute-force ground truth for tiny instances.

Everything here is deliberately naive and shares no search logic with the
library it checks: optima come from enumerating every instantiation, and
equivalence classes are counted by direct comparison of whole rows and
columns rather than by the pairwise indistinguishability test.
"""
from __future__ import annotations

from itertools import permutations

import numpy as np

from .core import ONE, ZERO, Digraph, PartialMatrix
from .errors import SizeLimitError

STAR_LIMIT = 22
ENTITY_LIMIT = 12
ISO_LIMIT = 8


def _check_limits(psm: PartialMatrix):
    if psm.n > ENTITY_LIMIT:
        raise SizeLimitError(f"oracle enumeration is limited to {ENTITY_LIMIT} entities, got {psm.n}")
    if psm.n_stars > STAR_LIMIT:
        raise SizeLimitError(f"oracle enumeration is limited to {STAR_LIMIT} stars, got {psm.n_stars}")


def _signatures(psm: PartialMatrix):
    """Walk all fills in Gray-code order, yielding per-entity row and column bitsets.

    Row bit ``a*n + v`` of entity ``u`` is cell ``(u, a, v)``; column bit
    ``u*k + a`` of entity ``v`` is the same cell.  Each step flips one star,
    which toggles exactly one bit in one row and one column.  The yielded
    lists are updated in place.
    """
    _check_limits(psm)
    n, k = psm.n, psm.k
    adj = psm.cells == ONE  # stars start at 0
    rows = [0] * n
    cols = [0] * n
    for u, a, v in np.argwhere(adj):
        rows[u] |= 1 << int(a * n + v)
        cols[v] |= 1 << int(u * k + a)
    flips = [(int(u), 1 << int(a * n + v), int(v), 1 << int(u * k + a))
             for u, a, v in psm.star_cells]
    yield rows, cols
    for step in range(1, 1 << len(flips)):
        u, rbit, v, cbit = flips[(step & -step).bit_length() - 1]
        rows[u] ^= rbit
        cols[v] ^= cbit
        yield rows, cols


def class_count(g: Digraph) -> int:
    """Number of entity classes with identical full row and column."""
    keys = {(g.adj[u].tobytes(), g.adj[:, :, u].tobytes()) for u in range(g.n)}
    return len(keys)


def dbpm_optimum(psm: PartialMatrix) -> int:
    """Fewest indistinguishability classes over all instantiations."""
    best = psm.n
    for rows, cols in _signatures(psm):
        best = min(best, len(set(zip(rows, cols))))
        if best == 1:
            break
    return best


def db_optimum(psm: PartialMatrix) -> int:
    """Fewest distinct rows over all instantiations."""
    best = psm.n
    for rows, _ in _signatures(psm):
        best = min(best, len(set(rows)))
        if best == 1:
            break
    return best


def dtepm_optimum(psm: PartialMatrix) -> int:
    """Smallest ``max(distinct rows, distinct columns)`` over all instantiations."""
    best = psm.n
    for rows, cols in _signatures(psm):
        best = min(best, max(len(set(rows)), len(set(cols))))
        if best == 1:
            break
    return best


# --- partitions and isomorphism ----------------------------------------------


def partition_refinement_classes(g: Digraph) -> tuple:
    """Class representative (minimum member) of every entity.

    Starts from one block and splits every block by each single out-bit and
    in-bit until nothing changes.
    """
    n, k = g.n, g.k
    blocks = [list(range(n))] if n else []
    features = [g.adj[:, a, w] for a in range(k) for w in range(n)]
    features += [g.adj[w, a, :] for a in range(k) for w in range(n)]
    changed = True
    while changed:
        changed = False
        for f in features:
            nxt = []
            for b in blocks:
                ones = [u for u in b if f[u]]
                zeros = [u for u in b if not f[u]]
                if ones and zeros:
                    changed = True
                    nxt += [zeros, ones]
                else:
                    nxt.append(b)
            blocks = nxt
    rep = [0] * n
    for b in blocks:
        for u in b:
            rep[u] = min(b)
    return tuple(rep)


def are_isomorphic(g1: Digraph, g2: Digraph) -> bool:
    """Try every vertex permutation (at most ``ISO_LIMIT`` vertices)."""
    if (g1.n, g1.k) != (g2.n, g2.k):
        return False
    if g1.n > ISO_LIMIT:
        raise SizeLimitError(f"isomorphism check is limited to {ISO_LIMIT} vertices")
    if g1.adj.sum() != g2.adj.sum():
        return False
    rights = np.arange(g1.k)
    for p in permutations(range(g1.n)):
        p = list(p)
        if np.array_equal(g1.adj[np.ix_(p, rights, p)], g2.adj):
            return True
    return False


def set_partitions(n):
    """All set partitions of ``0..n-1`` as restricted growth label lists."""
    if n == 0:
        yield []
        return
    labels = [0] * n

    def rec(i, top):
        if i == n:
            yield list(labels)
            return
        for c in range(top + 2):
            labels[i] = c
            yield from rec(i + 1, max(top, c))

    labels[0] = 0
    yield from rec(1, 0)


def quotient(g: Digraph, labels):
    """Digraph on the blocks of ``labels`` if that map is a strong homomorphism, else None."""
    m = max(labels) + 1
    out = np.zeros((m, g.k, m), dtype=bool)
    seen = np.zeros((m, g.k, m), dtype=bool)
    lab = np.asarray(labels)
    for u in range(g.n):
        for v in range(g.n):
            p, q = lab[u], lab[v]
            cell = g.adj[u, :, v]
            if (seen[p, :, q] & (out[p, :, q] != cell)).any():
                return None
            out[p, :, q] = cell
            seen[p, :, q] = True
    return Digraph.from_array(out)


def _embeds_as_proper_subgraph(q: Digraph, h: Digraph) -> bool:
    # injective vertex map sending every edge of q onto an edge of h, with q != h
    if q.n > h.n or q.k != h.k:
        return False
    rights = np.arange(h.k)
    for img in permutations(range(h.n), q.n):
        img = list(img)
        sub = h.adj[np.ix_(img, rights, img)]
        if (q.adj & ~sub).any():
            continue
        if q.n < h.n or not np.array_equal(q.adj, sub):
            return True
    return False


def brute_force_summaries(g: Digraph) -> list:
    """Every summary of ``g`` straight from the definition, one per admissible quotient.

    A candidate is the image of a surjective strong homomorphism; it is kept
    when no image of ``g`` fits inside it as a proper subgraph.
    """
    if g.n > ISO_LIMIT:
        raise SizeLimitError(f"summary enumeration is limited to {ISO_LIMIT} vertices")
    images = [q for q in (quotient(g, lab) for lab in set_partitions(g.n)) if q is not None]
    return [h for h in images if not any(_embeds_as_proper_subgraph(q, h) for q in images)]


# --- exact feasibility for reduction-sized instances ---------------------------


def dbpm_feasible(psm: PartialMatrix, m: int):
    """Whether some instantiation has at most ``m`` classes; returns a class map or None.

    Backtracking over entity-to-class maps with forward checking.  A map is
    realisable iff no block ``(p, a, q)`` receives both a specified 1 and a
    specified 0; filling every block uniformly then gives an instantiation
    with at most ``m`` classes.
    """
    n = psm.n
    p1 = (psm.cells == ONE).astype(np.int32)
    p0 = (psm.cells == ZERO).astype(np.int32)
    s1 = np.einsum("iai->ia", p1) > 0
    s0 = np.einsum("iai->ia", p0) > 0
    onehot = np.zeros((n, m), dtype=np.int32)
    assign = [-1] * n
    off_diag = ~np.eye(m, dtype=bool)

    def options():
        b1 = np.einsum("up,uav,vq->paq", onehot, p1, onehot) > 0
        b0 = np.einsum("up,uav,vq->paq", onehot, p0, onehot) > 0
        r1 = np.einsum("iaj,jc->iac", p1, onehot) > 0
        r0 = np.einsum("iaj,jc->iac", p0, onehot) > 0
        c1 = np.einsum("jai,jc->iac", p1, onehot) > 0
        c0 = np.einsum("jai,jc->iac", p0, onehot) > 0
        # i joins class p: blocks (p, a, c), (c, a, p) for c != p, and (p, a, p)
        row = ((b1[None] | r1[:, None]) & (b0[None] | r0[:, None])).any(axis=2)
        row = (row & off_diag[None]).any(axis=2)
        b1t, b0t = b1.transpose(2, 1, 0), b0.transpose(2, 1, 0)
        col = ((b1t[None] | c1[:, None]) & (b0t[None] | c0[:, None])).any(axis=2)
        col = (col & off_diag[None]).any(axis=2)
        d1 = np.einsum("pap->pa", b1)[None] | np.einsum("iap->ipa", r1 | c1) | s1[:, None, :]
        d0 = np.einsum("pap->pa", b0)[None] | np.einsum("iap->ipa", r0 | c0) | s0[:, None, :]
        diag = (d1 & d0).any(axis=2)
        return ~(row | col | diag)

    def search(used):
        free = [i for i in range(n) if assign[i] < 0]
        if not free:
            return True
        ok = options()
        limit = min(m, used + 1)  # classes are interchangeable: open at most one new class
        best, best_opts = None, None
        for i in free:
            opts = [p for p in range(limit) if ok[i, p]]
            if not opts:
                return False
            if best is None or len(opts) < len(best_opts):
                best, best_opts = i, opts
        for p in best_opts:
            assign[best] = p
            onehot[best, p] = 1
            if search(max(used, p + 1)):
                return True
            onehot[best, p] = 0
            assign[best] = -1
        return False

    if m < 1:
        return None
    return list(assign) if search(0) else None


def db_feasible(psm: PartialMatrix, m: int):
    """Whether the rows can be instantiated to at most ``m`` distinct patterns.

    Two rows can share a pattern iff no cell is 1 in one and 0 in the other,
    and a group of pairwise compatible rows always has a common pattern.  So
    this is ``m``-colouring the incompatibility graph; returns a colouring or None.
    """
    if psm.k != 1:
        raise ValueError("db_feasible expects a single right")
    rows = psm.cells[:, 0, :]
    n = psm.n
    clash = (((rows[:, None] == ONE) & (rows[None] == ZERO))
             | ((rows[:, None] == ZERO) & (rows[None] == ONE))).any(axis=2)
    color = [-1] * n
    order = sorted(range(n), key=lambda i: -int(clash[i].sum()))

    def search(pos, used):
        if pos == n:
            return True
        i = order[pos]
        for c in range(min(m, used + 1)):
            if all(color[j] != c for j in np.flatnonzero(clash[i])):
                color[i] = c
                if search(pos + 1, max(used, c + 1)):
                    return True
                color[i] = -1
        return False

    return list(color) if search(0, 0) else None
