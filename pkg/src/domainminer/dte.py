"""Domain and type enforcement: row/column equivalence and optimal DTE policies."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Digraph
from .errors import ArityError
from .summary import summarize


@dataclass(frozen=True)
class DtePolicy:
    """Domains label subjects (rows), types label objects (columns).

    ``tbl[d, a, t]`` grants right ``a`` from any entity of domain ``d`` to
    any entity of type ``t``.
    """

    delta: tuple
    tau: tuple
    tbl: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "delta", tuple(int(d) for d in self.delta))
        object.__setattr__(self, "tau", tuple(int(t) for t in self.tau))
        tbl = np.array(self.tbl, dtype=bool)
        tbl.setflags(write=False)
        object.__setattr__(self, "tbl", tbl)
        if tbl.ndim != 3:
            raise ArityError("tbl must be a |D| x k x |T| array")
        if len(self.delta) != len(self.tau):
            raise ArityError("delta and tau must cover the same entities")
        if any(not 0 <= d < tbl.shape[0] for d in self.delta):
            raise ValueError("domain index out of range")
        if any(not 0 <= t < tbl.shape[2] for t in self.tau):
            raise ValueError("type index out of range")

    @property
    def domain_count(self) -> int:
        return self.tbl.shape[0]

    @property
    def type_count(self) -> int:
        return self.tbl.shape[2]

    @property
    def k(self) -> int:
        return self.tbl.shape[1]

    def expand(self) -> Digraph:
        d = np.asarray(self.delta)
        t = np.asarray(self.tau)
        return Digraph.from_array(self.tbl[np.ix_(d, np.arange(self.k), t)])

    def to_dict(self) -> dict:
        return {
            "domains": self.domain_count,
            "types": self.type_count,
            "delta": list(self.delta),
            "tau": list(self.tau),
            "tbl": self.tbl.astype(int).tolist(),
        }


def row_equivalent(m: Digraph, u: int, v: int) -> bool:
    """``u`` and ``v`` make the same requests as subjects."""
    return bool(np.array_equal(m.adj[u], m.adj[v]))


def col_equivalent(m: Digraph, u: int, v: int) -> bool:
    """``u`` and ``v`` receive the same requests as objects."""
    return bool(np.array_equal(m.adj[:, :, u], m.adj[:, :, v]))


def _first_occurrence_labels(vectors):
    # classes numbered by first appearance; keyed on the raw row bytes
    labels = {}
    out = []
    for vec in vectors:
        out.append(labels.setdefault(vec.tobytes(), len(labels)))
    return out, len(labels)


def row_labels(m: Digraph):
    return _first_occurrence_labels(m.adj.reshape(m.n, -1))


def col_labels(m: Digraph):
    cols = np.ascontiguousarray(m.adj.transpose(2, 1, 0)).reshape(m.n, -1)
    return _first_occurrence_labels(cols)


def counts(m: Digraph):
    """``(r, c, e)``: class counts of row, column and full indistinguishability."""
    _, r = row_labels(m)
    _, c = col_labels(m)
    policy, _ = summarize(m)
    return r, c, policy.n_domains


def mine_dte(m: Digraph) -> DtePolicy:
    """A DTE policy with one domain per row class and one type per column class.

    Both counts are lower bounds for any enforcing policy, so
    ``max(|D|, |T|)`` is minimal.
    """
    delta, r = row_labels(m)
    tau, c = col_labels(m)
    row_rep = [delta.index(d) for d in range(r)]
    col_rep = [tau.index(t) for t in range(c)]
    tbl = m.adj[np.ix_(row_rep, np.arange(m.k), col_rep)]
    policy = DtePolicy(delta, tau, tbl)
    # any representative pair gives the same cell when classes are well defined
    assert np.array_equal(policy.expand().adj, m.adj)
    return policy


def dte_enforces(policy: DtePolicy, m: Digraph) -> bool:
    if len(policy.delta) != m.n or policy.k != m.k:
        raise ArityError(
            f"policy covers {len(policy.delta)} entities / {policy.k} rights, "
            f"matrix has {m.n} / {m.k}"
        )
    return bool(np.array_equal(policy.expand().adj, m.adj))
