import sys
import textwrap
import time
from itertools import product

import numpy as np
import pytest

from domainminer.benchgen import generate
from domainminer.core import ONE, STAR, ZERO, PartialMatrix
from domainminer.encode import ENCODINGS, EncodingConfig, encode, format_wcnf
from domainminer.errors import InfeasibleError, IntegrityError, SolverError, SolveTimeout
from domainminer.oracle import dbpm_optimum
from domainminer.reductions import UndirectedGraph, three_color_to_dbpm
from domainminer.sat import Solver, _luby
from domainminer.solve import (
    SOLVER_ENV,
    Status,
    main as solve_main,
    maxsat_linear,
    mine,
    solve_builtin,
    solve_external,
)
from domainminer.summary import summarize

from conftest import random_psm

SHIM = f"{sys.executable} -m domainminer.solve"


def brute_sat(nvars, clauses, assumptions=()):
    for bits in product((False, True), repeat=nvars):
        if any(bits[abs(a) - 1] != (a > 0) for a in assumptions):
            continue
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses):
            return True
    return False


def test_luby_prefix():
    assert [_luby(i) for i in range(1, 16)] == [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]


@pytest.mark.parametrize("branching", ["activity", "lowest"])
def test_sat_matches_brute_force(branching):
    rng = np.random.default_rng(3)
    for _ in range(150):
        nvars = int(rng.integers(1, 9))
        clauses = []
        for _ in range(int(rng.integers(1, 4 * nvars + 2))):
            width = int(rng.integers(1, 4))
            vs = rng.choice(nvars, size=min(width, nvars), replace=False) + 1
            clauses.append([int(v) if rng.random() < 0.5 else -int(v) for v in vs])
        assumptions = [int(v) * (1 if rng.random() < 0.5 else -1)
                       for v in rng.choice(nvars, size=min(nvars, int(rng.integers(0, 3))), replace=False) + 1]
        s = Solver(nvars, branching=branching)
        for c in clauses:
            s.add_clause(c)
        got = s.solve(assumptions)
        assert got == brute_sat(nvars, clauses, assumptions)
        if got:
            model = s.model
            assert all(any(model[abs(l)] == (l > 0) for l in c) for c in clauses)
            assert all(model[abs(a)] == (a > 0) for a in assumptions)


def pigeonhole(holes):
    var = lambda p, h: p * holes + h + 1
    clauses = [[var(p, h) for h in range(holes)] for p in range(holes + 1)]
    for h in range(holes):
        for p in range(holes + 1):
            for q in range(p + 1, holes + 1):
                clauses.append([-var(p, h), -var(q, h)])
    return (holes + 1) * holes, clauses


def test_pigeonhole_unsat():
    nvars, clauses = pigeonhole(5)
    s = Solver(nvars)
    for c in clauses:
        s.add_clause(c)
    assert s.solve() is False
    assert s.conflicts > 0


def test_solver_rejects_bad_input():
    with pytest.raises(ValueError):
        Solver(branching="random")
    with pytest.raises(ValueError):
        Solver(2).add_clause([1, 0])


def test_forced_soft_violation():
    res = maxsat_linear(1, [(1,)], [((-1,), 1)])
    assert res.status is Status.OPTIMAL and res.objective == 0


def test_unsat_hard():
    res = maxsat_linear(1, [(1,), (-1,)], [])
    assert res.status is Status.INFEASIBLE


def test_weighted_and_wide_soft():
    # soft: (1 or 2) weight 3, (-1) weight 1, (-2) weight 1
    res = maxsat_linear(2, [], [((1, 2), 3), ((-1,), 1), ((-2,), 1)])
    assert res.objective == 4


def test_timeout_reports_status():
    nvars, clauses = pigeonhole(9)
    res = maxsat_linear(nvars, clauses, [], timeout=0.05)
    assert res.status is Status.TIMEOUT


def test_complete_matrix_objective(rng):
    for _ in range(5):
        psm = random_psm(rng, 8, 1)
        true = summarize(psm.to_digraph())[0].n_domains
        inst = encode(psm, EncodingConfig.from_name("BE+NF+MD+LI", 2 * true))
        res = solve_builtin(inst)
        assert res.objective == 2 * true - true
        assert {"decisions", "propagations", "wall_time"} <= set(res.stats)


def two_inequivalent():
    cells = np.full((2, 1, 2), STAR, dtype=np.int8)
    cells[0, 0, 0] = ONE
    cells[1, 0, 0] = ZERO
    return PartialMatrix(cells)


def test_infeasible_then_feasible():
    psm = two_inequivalent()
    with pytest.raises(InfeasibleError, match="2"):
        mine(psm, "BE", m=1)
    assert mine(psm, "BE", m=2).n_domains == 2


def test_mine_without_stars_matches_summary(rng):
    for _ in range(5):
        psm = random_psm(rng, 7, 2)
        assert mine(psm).n_domains == summarize(psm.to_digraph())[0].n_domains


def test_star_merges_rows():
    # rows 0 and 1 differ only in a star; row 2 is distinct
    cells = np.array([[1, 1, 0], [1, -1, 0], [0, 0, 1]], dtype=np.int8)
    psm = PartialMatrix(cells)
    assert dbpm_optimum(psm) == 2
    assert mine(psm).n_domains == 2


def test_triangle_reduction_optimum():
    m, psm = three_color_to_dbpm(UndirectedGraph.complete(3))
    res = mine(psm, "BE+NF+MD+LI", m=m)
    assert res.n_domains == 9


def test_mine_timeout():
    inst = generate(3, 60, seed=5)
    start = time.monotonic()
    with pytest.raises(SolveTimeout):
        mine(inst.psm, "BE", m=inst.m, timeout=0.05)
    assert time.monotonic() - start < 10


@pytest.mark.parametrize("name", ENCODINGS)
def test_monotone_in_stars(name):
    rng = np.random.default_rng(11)
    for _ in range(4):
        psm = random_psm(rng, 5, 1)
        order = rng.permutation(25)
        prev = None
        for count in (0, 3, 6):
            cells = psm.cells.copy()
            cells.reshape(-1)[order[:count]] = STAR
            cur = mine(PartialMatrix(cells), name, m=5).n_domains
            assert prev is None or cur <= prev
            prev = cur


def test_external_shim_agrees(rng, monkeypatch):
    monkeypatch.delenv(SOLVER_ENV, raising=False)
    for _ in range(5):
        psm = random_psm(rng, 4, 1, n_stars=4)
        inst = encode(psm, EncodingConfig.from_name("BE+NF+MD+LI", 4))
        ext = solve_external(inst, SHIM, timeout=60)
        assert ext.status is Status.OPTIMAL
        assert ext.objective == solve_builtin(inst).objective
    assert mine(psm, solver=SHIM).n_domains == mine(psm).n_domains


def fake_solver(tmp_path, body):
    path = tmp_path / "fake_solver.py"
    path.write_text(textwrap.dedent(body))
    return f"{sys.executable} {path}"


def test_external_unsat(tmp_path):
    cmd = fake_solver(tmp_path, 'print("s UNSATISFIABLE")\n')
    inst = encode(two_inequivalent(), EncodingConfig(1))
    assert solve_external(inst, cmd).status is Status.INFEASIBLE


def test_external_timeout(tmp_path):
    cmd = fake_solver(tmp_path, "import time\ntime.sleep(30)\n")
    inst = encode(two_inequivalent(), EncodingConfig(2))
    start = time.monotonic()
    res = solve_external(inst, cmd, timeout=0.5)
    assert res.status is Status.TIMEOUT and res.assignment is None
    assert time.monotonic() - start < 10


def test_external_without_status_line(tmp_path):
    cmd = fake_solver(tmp_path, "import sys\nsys.exit(1)\n")
    with pytest.raises(SolverError, match="no 's' line"):
        solve_external(encode(two_inequivalent(), EncodingConfig(2)), cmd)


def test_external_bad_model(tmp_path):
    cmd = fake_solver(tmp_path, 'print("s OPTIMUM FOUND")\nprint("o 0")\nprint("v 0")\n')
    with pytest.raises(IntegrityError):
        solve_external(encode(two_inequivalent(), EncodingConfig(2)), cmd)


def test_env_var_overrides_command(tmp_path, monkeypatch):
    cmd = fake_solver(tmp_path, 'print("s UNSATISFIABLE")\n')
    monkeypatch.setenv(SOLVER_ENV, cmd)
    inst = encode(two_inequivalent(), EncodingConfig(2))
    assert solve_external(inst, "does-not-exist").status is Status.INFEASIBLE


def test_missing_external_command(monkeypatch):
    monkeypatch.delenv(SOLVER_ENV, raising=False)
    with pytest.raises(SolverError):
        solve_external(encode(two_inequivalent(), EncodingConfig(2)), "no-such-solver-binary")


def test_shim_entry_point(tmp_path, capsys):
    inst = encode(two_inequivalent(), EncodingConfig(1))
    (tmp_path / "a.wcnf").write_text(format_wcnf(inst))
    assert solve_main([str(tmp_path / "a.wcnf")]) == 20
    assert "s UNSATISFIABLE" in capsys.readouterr().out
    assert solve_main([]) == 64
