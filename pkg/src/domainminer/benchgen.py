"""Seeded random benchmark instances for policy mining.

Each instance hides a policy: a random digraph ``H`` on ``m_star`` domains
is blown up to ``n`` entities by a balanced assignment, and a fraction of
the cells is then blanked to ``*``.  The optimum is therefore at most
``m_star`` (strictly less when ``H`` has indistinguishable vertices).
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from itertools import product
from pathlib import Path

import numpy as np

from .core import STAR, Digraph, DomainPolicy, PartialMatrix, enforces, write_matrix

MANIFEST_FIELDS = ("instance", "path", "m_star", "n", "seed", "m")


def _rng(seed):
    entropy = list(seed) if isinstance(seed, (tuple, list)) else [seed]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


@dataclass(frozen=True)
class BenchInstance:
    name: str
    psm: PartialMatrix
    hidden: Digraph
    m_star: int
    n: int
    seed: tuple

    @property
    def m(self) -> int:
        """Class budget used when solving: twice the planted domain count."""
        return 2 * self.m_star


def generate(m_star, n, edge_prob=0.5, star_frac=0.10, seed=0, k=1, name=None) -> BenchInstance:
    if not 1 <= m_star <= n:
        raise ValueError(f"need 1 <= m_star <= n, got m_star={m_star}, n={n}")
    if k < 1:
        raise ValueError("k must be >= 1")
    if not 0.0 <= edge_prob <= 1.0 or not 0.0 <= star_frac <= 1.0:
        raise ValueError("edge_prob and star_frac must lie in [0, 1]")
    rng = _rng(seed)
    hidden = rng.random((m_star, k, m_star)) < edge_prob
    assignment = rng.permutation(np.arange(n) % m_star)
    g = Digraph.from_array(hidden[np.ix_(assignment, np.arange(k), assignment)])
    h = Digraph.from_array(hidden)
    assert enforces(DomainPolicy(h, assignment), g)

    cells = g.adj.astype(np.int8)
    n_star = math.floor(star_frac * cells.size + 1e-9)
    blanks = rng.choice(cells.size, size=n_star, replace=False)
    cells.reshape(-1)[blanks] = STAR
    seed = tuple(seed) if isinstance(seed, (tuple, list)) else (seed,)
    return BenchInstance(name or f"ms{m_star}_n{n}", PartialMatrix(cells), h, m_star, n, seed)


def suite(m_star_set, n_set, per_cell, seed=0, **kw) -> list:
    """Cross product of the parameter grid, ``per_cell`` replicates each."""
    out = []
    for m_star, n, rep in product(m_star_set, n_set, range(per_cell)):
        name = f"ms{m_star}_n{n}_r{rep}"
        out.append(generate(m_star, n, seed=(seed, m_star, n, rep), name=name, **kw))
    return out


FULL_GRID = dict(m_star_set=(2, 4, 6, 8, 10), n_set=tuple(range(100, 1001, 100)), per_cell=6)
DESK_GRID = dict(m_star_set=(2, 3), n_set=(20, 40, 60), per_cell=5)


def write_suite(instances, outdir) -> Path:
    """Write each matrix plus ``manifest.csv``; returns the manifest path."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    manifest = outdir / "manifest.csv"
    with manifest.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(MANIFEST_FIELDS)
        for inst in instances:
            path = f"{inst.name}.psm"
            write_matrix(inst.psm, outdir / path)
            writer.writerow(
                [inst.name, path, inst.m_star, inst.n, "-".join(map(str, inst.seed)), inst.m]
            )
    return manifest


def read_manifest(path) -> list:
    """Manifest rows as dicts, with ``path`` resolved against the manifest directory."""
    path = Path(path)
    rows = []
    with path.open(newline="") as fh:
        for row in csv.DictReader(fh):
            row["path"] = str(path.parent / row["path"])
            for key in ("m_star", "n", "m"):
                row[key] = int(row[key])
            rows.append(row)
    return rows
