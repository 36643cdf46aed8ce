import csv

from domainminer.benchgen import read_manifest, suite, write_suite
from domainminer.evaluation import (
    RunRecord,
    cactus_points,
    run_eval,
    run_one,
    summary_table,
    write_results,
)


def rec(name, status, seconds, enc="BE"):
    return RunRecord(name, enc, status, seconds, 0 if status == "optimal" else None)


def test_cactus_cumulative_sum():
    assert cactus_points([4, 1, 2]) == [(1, 1), (3, 2), (7, 3)]
    assert cactus_points([]) == []


def test_timeouts_excluded_from_totals():
    results = {"BE": [rec("a", "optimal", 1.0), rec("b", "timeout", 60.0), rec("c", "optimal", 2.0)]}
    assert summary_table(results) == [("BE", 2, 3.0)]


def test_written_csvs(tmp_path):
    results = {
        "BE": [rec("b", "optimal", 2.0), rec("a", "optimal", 1.0), rec("c", "optimal", 4.0)],
        "BE+NF": [rec("a", "timeout", 60.0, "BE+NF"), rec("b", "infeasible", 0.5, "BE+NF")],
    }
    paths = write_results(results, tmp_path)
    with paths["BE"].open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["instance", "status", "seconds", "objective"]
    assert [r[0] for r in rows[1:]] == ["a", "b", "c"]
    with paths["BE+NF"].open() as fh:
        assert list(csv.reader(fh))[1] == ["a", "timeout", "60.000", ""]
    with paths["cactus"].open() as fh:
        cactus = [(r["encoding"], float(r["T"]), int(r["i"])) for r in csv.DictReader(fh)]
    assert cactus == [("BE", 1.0, 1), ("BE", 3.0, 2), ("BE", 7.0, 3)]
    with paths["summary"].open() as fh:
        summary = list(csv.DictReader(fh))
    assert [(r["encoding"], r["solved"]) for r in summary] == [("BE", "3"), ("BE+NF", "0")]


def test_run_one_statuses(tmp_path):
    rows = read_manifest(write_suite(suite((2,), (6,), 1, seed=2), tmp_path))
    row = rows[0]
    ok = run_one(row["path"], row["instance"], "BE", row["m"])
    assert ok.status == "optimal" and ok.n_domains <= 2
    assert run_one(row["path"], row["instance"], "BE", 1).status in ("optimal", "infeasible")


def test_pool_keeps_order(tmp_path):
    rows = read_manifest(write_suite(suite((2, 3), (6,), 2, seed=1), tmp_path))
    serial = run_eval(rows, ["BE+NF", "BE"], workers=1)
    pooled = run_eval(rows, ["BE+NF", "BE"], workers=3)
    assert list(pooled) == ["BE+NF", "BE"]
    for enc in serial:
        assert [r.instance for r in pooled[enc]] == [r["instance"] for r in rows]
        assert [r.n_domains for r in pooled[enc]] == [r.n_domains for r in serial[enc]]
