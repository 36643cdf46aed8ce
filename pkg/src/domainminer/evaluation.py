"""Benchmark harness: solve a manifest under several encodings and tabulate.

Outputs are plain CSV so plots can be made elsewhere:

* ``<encoding>.csv`` with columns ``instance,status,seconds,objective``
* ``summary.csv`` with ``encoding,solved,total_seconds`` (solved instances only)
* ``cactus.csv`` with ``encoding,T,i``: the ``i`` fastest solved instances
  together took ``T`` seconds
"""
from __future__ import annotations

import csv
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import accumulate
from pathlib import Path

from .core import read_matrix
from .errors import InfeasibleError, SolveTimeout
from .solve import Status, mine

RESULT_FIELDS = ("instance", "status", "seconds", "objective")
SUMMARY_FIELDS = ("encoding", "solved", "total_seconds")
CACTUS_FIELDS = ("encoding", "T", "i")


@dataclass(frozen=True)
class RunRecord:
    instance: str
    encoding: str
    status: str
    seconds: float
    objective: int | None = None
    n_domains: int | None = None

    def row(self):
        obj = "" if self.objective is None else self.objective
        return [self.instance, self.status, f"{self.seconds:.3f}", obj]


def run_one(path, instance, encoding, m, timeout=None, solver="builtin") -> RunRecord:
    """Solve one manifest entry; never raises for infeasible or timed-out runs."""
    psm = read_matrix(path)
    start = time.monotonic()
    try:
        res = mine(psm, encoding=encoding, m=m, timeout=timeout, solver=solver)
    except InfeasibleError:
        return RunRecord(instance, encoding, Status.INFEASIBLE.value, time.monotonic() - start)
    except SolveTimeout:
        return RunRecord(instance, encoding, Status.TIMEOUT.value, time.monotonic() - start)
    return RunRecord(instance, encoding, Status.OPTIMAL.value, time.monotonic() - start,
                     res.objective, res.n_domains)


def _run_job(job):
    return run_one(*job)


def run_eval(rows, encodings, timeout=None, workers=1, solver="builtin") -> dict:
    """Run every (instance, encoding) pair; returns ``{encoding: [RunRecord, ...]}``.

    ``rows`` are manifest dicts with ``instance``, ``path`` and ``m``.
    Records keep manifest order whatever the pool width.
    """
    jobs = [(r["path"], r["instance"], enc, r["m"], timeout, solver)
            for enc in encodings for r in rows]
    if workers <= 1:
        records = [_run_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_job, jobs))
    out = {enc: [] for enc in encodings}
    for rec in records:
        out[rec.encoding].append(rec)
    return out


def solved_times(records) -> list:
    return [r.seconds for r in records if r.status == Status.OPTIMAL.value]


def cactus_points(times) -> list:
    """``(T_i, i)`` for the sorted times: ``T_i`` is the sum of the ``i`` smallest."""
    return [(t, i) for i, t in enumerate(accumulate(sorted(times)), start=1)]


def summary_table(results: dict) -> list:
    """``(encoding, solved, total_seconds)``; timed-out runs do not count toward time."""
    table = []
    for enc, records in results.items():
        times = solved_times(records)
        table.append((enc, len(times), sum(times)))
    return table


def write_results(results: dict, outdir) -> dict:
    """Write the per-encoding, summary and cactus CSVs; returns their paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = {}
    for enc, records in results.items():
        path = outdir / f"{enc}.csv"
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(RESULT_FIELDS)
            w.writerows(sorted((r.row() for r in records), key=lambda row: row[0]))
        paths[enc] = path
    paths["summary"] = outdir / "summary.csv"
    with paths["summary"].open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SUMMARY_FIELDS)
        for enc, solved, total in summary_table(results):
            w.writerow([enc, solved, f"{total:.3f}"])
    paths["cactus"] = outdir / "cactus.csv"
    with paths["cactus"].open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CACTUS_FIELDS)
        for enc, records in results.items():
            for t, i in cactus_points(solved_times(records)):
                w.writerow([enc, f"{t:.3f}", i])
    return paths
