import csv
import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from domainminer import cli
from domainminer.benchgen import generate, suite, write_suite
from domainminer.core import PartialMatrix, read_matrix, write_matrix
from domainminer.dte import mine_dte
from domainminer.encode import ENCODINGS, read_wcnf
from domainminer.reductions import UndirectedGraph, format_graph
from domainminer.summary import summarize

from conftest import random_psm

SAMPLE = Path(__file__).parent.parent / "docs" / "sample.psm"


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def complete(tmp_path, rng):
    psm = random_psm(rng, 8, 2)
    path = tmp_path / "full.psm"
    write_matrix(psm, path)
    return path, psm


def test_encoding_names_are_the_six_rows():
    assert ENCODINGS == ("BE", "BE+CC", "BE+NF", "BE+NF+FM", "BE+NF+MD", "BE+NF+MD+LI")


def test_summarize_matches_library(capsys, complete):
    path, psm = complete
    code, out, _ = run(capsys, "summarize", path)
    assert code == 0
    doc = json.loads(out)
    policy, part = summarize(psm.to_digraph())
    assert doc["classes"] == [list(c) for c in part.classes]
    assert {k: v for k, v in doc.items() if k != "classes"} == json.loads(policy.to_json())


def test_summarize_rejects_stars(capsys):
    code, _, err = run(capsys, "summarize", SAMPLE)
    assert code == 64 and "unspecified" in err


def test_mine_star_free_equals_summarize(capsys, complete):
    path, psm = complete
    code, out, _ = run(capsys, "mine", path)
    assert code == 0
    doc = json.loads(out)
    assert len(set(doc["assignment"])) == summarize(psm.to_digraph())[0].n_domains
    assert {"encoding", "m", "objective"} <= set(doc)


def test_mine_sample_to_file(capsys, tmp_path):
    out = tmp_path / "p.json"
    assert run(capsys, "mine", SAMPLE, "--encoding", "BE", "--m", "3", "-o", out)[0] == 0
    doc = json.loads(out.read_text())
    assert doc["encoding"] == "BE" and doc["m"] == 3


def test_mine_infeasible_exit(capsys, tmp_path):
    cells = np.array([[[1, -1]], [[0, -1]]], dtype=np.int8)
    path = tmp_path / "two.psm"
    write_matrix(PartialMatrix(cells), path)
    code, _, err = run(capsys, "mine", path, "--m", "1")
    assert code == 2 and "infeasible" in err


def test_mine_timeout_exit(capsys, tmp_path):
    path = tmp_path / "big.psm"
    write_matrix(generate(3, 60, seed=5).psm, path)
    code, _, _ = run(capsys, "mine", path, "--encoding", "BE", "--m", "6", "--timeout", "0.05")
    assert code == 3


@pytest.mark.parametrize("name", ["BE+CC+NF", "BE+NF+FM+MD", "XX"])
def test_conflicting_encodings(capsys, name):
    code, _, err = run(capsys, "mine", SAMPLE, "--encoding", name)
    assert code == 64 and "error" in err


def test_missing_solver(capsys, monkeypatch):
    monkeypatch.delenv("DOMAINMINER_SOLVER", raising=False)
    code, _, err = run(capsys, "mine", SAMPLE, "--solver", "no-such-maxsat-binary")
    assert code == 64 and "not found" in err


def test_unknown_flag_and_bad_file(capsys, tmp_path):
    with pytest.raises(SystemExit) as exc:
        cli.main(["mine", str(SAMPLE), "--frobnicate"])
    assert exc.value.code == 64
    (tmp_path / "bad.psm").write_text("psm 2\n")
    assert run(capsys, "mine", tmp_path / "bad.psm")[0] == 64
    assert run(capsys, "mine", tmp_path / "missing.psm")[0] == 64


def test_encode_writes_wcnf(capsys, tmp_path):
    out = tmp_path / "s.wcnf"
    assert run(capsys, "encode", SAMPLE, "--encoding", "BE+CC", "--m", "2", "-o", out)[0] == 0
    nvars, hard, soft = read_wcnf(out)
    assert len(soft) == 2 and nvars > 0


def test_dte_matches_library(capsys, complete):
    path, psm = complete
    code, out, _ = run(capsys, "dte", path)
    assert code == 0 and json.loads(out) == json.loads(json.dumps(mine_dte(psm.to_digraph()).to_dict()))


def test_reduce_and_oracle(capsys, tmp_path):
    graph = tmp_path / "k3.g"
    graph.write_text(format_graph(UndirectedGraph.complete(3)))
    out = tmp_path / "k3.psm"
    code, stdout, _ = run(capsys, "reduce", "--from", "3col-db", graph, "-o", out)
    assert code == 0 and json.loads(stdout) == {"m": 3, "entities": 15, "rights": 1}
    assert out.read_text().startswith("# class budget m = 3\n")
    code, stdout, _ = run(capsys, "reduce", "--from", "3col-dbpm", graph)
    assert code == 0 and stdout.startswith("# class budget m = 9\n")

    tiny = tmp_path / "tiny.psm"
    write_matrix(PartialMatrix(np.array([[[1, -1]], [[0, 1]]], dtype=np.int8)), tiny)
    code, stdout, _ = run(capsys, "reduce", "--from", "db-dtepm", tiny, "--m", "2")
    assert code == 0 and stdout.startswith("# class budget m = 7\n")
    assert run(capsys, "reduce", "--from", "db-dtepm", tiny)[0] == 64

    for problem, want in (("dbpm", 2), ("db", 2), ("dtepm", 2)):
        code, stdout, _ = run(capsys, "oracle", tiny, "--problem", problem)
        assert json.loads(stdout) == {"problem": problem, "optimum": want}
    assert run(capsys, "oracle", out)[0] == 64  # too many stars


def test_gen_bench_and_eval(capsys, tmp_path):
    bench = tmp_path / "bench"
    code, stdout, _ = run(capsys, "gen-bench", "-o", bench, "--m-star", "2", "--n", "8", "--per-cell", "2")
    assert code == 0 and stdout.startswith("2 instances")
    outdir = tmp_path / "eval"
    code, stdout, _ = run(capsys, "eval", "--manifest", bench / "manifest.csv",
                          "--encodings", "BE", "BE+NF+MD+LI", "--timeout", "30", "-o", outdir)
    assert code == 0 and "BE+NF+MD+LI" in stdout
    with (outdir / "BE.csv").open() as fh:
        rows = list(csv.DictReader(fh))
    assert [r["status"] for r in rows] == ["optimal", "optimal"]
    with (outdir / "cactus.csv").open() as fh:
        cactus = list(csv.reader(fh))
    assert cactus[0] == ["encoding", "T", "i"] and len(cactus) == 5
    with (outdir / "summary.csv").open() as fh:
        assert [r["solved"] for r in csv.DictReader(fh)] == ["2", "2"]


def test_eval_rejects_bad_encoding(capsys, tmp_path):
    write_suite(suite((2,), (4,), 1), tmp_path)
    code, _, _ = run(capsys, "eval", "--manifest", tmp_path / "manifest.csv", "--encodings", "BE+CC+NF")
    assert code == 64


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "domainminer.cli", "oracle", str(SAMPLE)],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["optimum"] == 2
