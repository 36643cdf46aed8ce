from itertools import combinations

import numpy as np
import pytest

from domainminer.core import Digraph
from domainminer.dte import (
    DtePolicy,
    col_equivalent,
    counts,
    dte_enforces,
    mine_dte,
    row_equivalent,
)
from domainminer.errors import ArityError
from domainminer.reductions import interlock_matrix
from domainminer.summary import indistinguishable

from conftest import blown_up_digraph, random_digraph


def sorted_distinct(vectors):
    # sort bit-strings and count changes between neighbours
    keys = sorted("".join("1" if b else "0" for b in v) for v in vectors)
    return sum(1 for i, key in enumerate(keys) if i == 0 or key != keys[i - 1])


def dedup_counts(g):
    rows = [g.adj[u].ravel() for u in range(g.n)]
    cols = [g.adj[:, :, u].ravel() for u in range(g.n)]
    return sorted_distinct(rows), sorted_distinct(cols)


def test_reflexive(rng):
    g = random_digraph(rng, 5, 2)
    assert all(row_equivalent(g, u, u) and col_equivalent(g, u, u) for u in range(5))


def test_single_cell_difference():
    g = Digraph(3, 1, [(0, 0, 2)])
    assert not row_equivalent(g, 0, 1)
    assert col_equivalent(g, 0, 1)


def test_conjunction_is_indistinguishability(rng):
    for _ in range(20):
        g = blown_up_digraph(rng, int(rng.integers(2, 21)), int(rng.integers(1, 3)))
        for u, v in combinations(range(g.n), 2):
            both = row_equivalent(g, u, v) and col_equivalent(g, u, v)
            assert both == indistinguishable(g, u, v)


def test_counts_edgeless():
    assert counts(Digraph(4, 2)) == (1, 1, 1)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
def test_counts_interlock_block(n):
    g = Digraph.from_array(interlock_matrix(n).astype(bool))
    r, c, _ = counts(g)
    assert (r, c) == dedup_counts(g) == (2 * n + 1, n + 1)


def test_counts_bounded_by_classes(rng):
    for _ in range(50):
        g = blown_up_digraph(rng, int(rng.integers(1, 15)), int(rng.integers(1, 3)))
        r, c, e = counts(g)
        assert r <= e and c <= e


def test_mine_dte_trivial_matrices():
    empty = mine_dte(Digraph(3, 1))
    assert (empty.domain_count, empty.type_count) == (1, 1) and not empty.tbl.any()
    full = mine_dte(Digraph.from_array(np.ones((3, 2, 3), dtype=bool)))
    assert (full.domain_count, full.type_count) == (1, 1) and full.tbl.all()


def test_mine_dte_matches_sort_oracle(rng):
    for _ in range(30):
        g = blown_up_digraph(rng, 10, 1)
        policy = mine_dte(g)
        assert (policy.domain_count, policy.type_count) == dedup_counts(g)
        assert dte_enforces(policy, g)
        assert np.array_equal(policy.expand().adj, g.adj)


def test_first_occurrence_numbering():
    g = Digraph(3, 1, [(1, 0, 0)])
    policy = mine_dte(g)
    assert policy.delta == (0, 1, 0)
    assert policy.tau == (0, 1, 1)


def test_flipped_bit_breaks_enforcement(rng):
    g = random_digraph(rng, 6, 1)
    policy = mine_dte(g)
    tbl = policy.tbl.copy()
    tbl[0, 0, 0] ^= True
    assert not dte_enforces(DtePolicy(policy.delta, policy.tau, tbl), g)


def test_single_entity():
    g = Digraph(1, 1, [(0, 0, 0)])
    assert dte_enforces(mine_dte(g), g)


def test_shape_mismatch():
    policy = mine_dte(Digraph(2, 1))
    with pytest.raises(ArityError):
        dte_enforces(policy, Digraph(3, 1))


def test_idempotent(rng):
    g = random_digraph(rng, 8, 2)
    policy = mine_dte(g)
    again = mine_dte(policy.expand())
    assert (again.domain_count, again.type_count) == (policy.domain_count, policy.type_count)


def test_json_shape(rng):
    doc = mine_dte(random_digraph(rng, 4, 1)).to_dict()
    assert set(doc) == {"domains", "types", "delta", "tau", "tbl"}
