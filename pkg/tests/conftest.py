import numpy as np
import pytest

from domainminer.core import STAR, Digraph, PartialMatrix


def random_digraph(rng, n, k=1, p=0.5):
    return Digraph.from_array(rng.random((n, k, n)) < p)


def blown_up_digraph(rng, n, k=1, m=None, p=0.5):
    """Random digraph with repeated entity profiles, so classes are non-trivial."""
    m = m or int(rng.integers(1, n + 1))
    h = rng.random((m, k, m)) < p
    pi = rng.integers(0, m, size=n)
    return Digraph.from_array(h[np.ix_(pi, np.arange(k), pi)])


def random_psm(rng, n, k=1, n_stars=0, p=0.5):
    cells = (rng.random((n, k, n)) < p).astype(np.int8)
    n_stars = min(n_stars, cells.size)
    idx = rng.choice(cells.size, size=n_stars, replace=False)
    cells.reshape(-1)[idx] = STAR
    return PartialMatrix(cells)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
