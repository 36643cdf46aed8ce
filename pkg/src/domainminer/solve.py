"""Optimal models for the policy-mining MaxSAT instances.

The builtin solver runs a linear search on the objective: for ``t`` from
the number of soft clauses down to 0 it asks the CDCL engine for a model
with at least ``t`` satisfied soft clauses, using a sequential counter over
the violated soft clauses and a single assumption per bound.  The first
satisfiable bound is optimal.

External solvers are driven through the usual WCNF protocol: the instance
path is the last argument and the solver prints ``s``/``o``/``v`` lines.
Running this module as a script exposes the builtin solver the same way::

    python -m domainminer.solve instance.wcnf
"""
from __future__ import annotations

import enum
import os
import shlex
import subprocess
import sys
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import Digraph, DomainPolicy, PartialMatrix
from .encode import (
    CnfInstance,
    EncodingConfig,
    decode,
    default_class_budget,
    encode,
    format_wcnf,
    parse_model,
    parse_wcnf,
    satisfies,
)
from .errors import InfeasibleError, IntegrityError, SolverError, SolveTimeout
from .sat import Solver, Timeout

SOLVER_ENV = "DOMAINMINER_SOLVER"


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    TIMEOUT = "timeout"


@dataclass
class SolveResult:
    """Outcome of one MaxSAT solve.

    ``objective`` counts satisfied soft clauses (unoccupied classes for the
    mining encodings).  On timeout ``bound`` is the best proven upper bound.
    """

    status: Status
    objective: int | None = None
    assignment: np.ndarray | None = None
    bound: int | None = None
    stats: dict = field(default_factory=dict)


def _sequential_counter(solver, inputs):
    """Registers ``outs[j]`` forced true when at least ``j + 1`` inputs are true."""
    prev = []
    for i, b in enumerate(inputs):
        cur = [solver.new_var() for _ in range(i + 1)]
        solver.add_clause([-b, cur[0]])
        for j, s in enumerate(prev):
            solver.add_clause([-s, cur[j]])
            solver.add_clause([-b, -s, cur[j + 1]])
        prev = cur
    return prev


def maxsat_linear(nvars, hard, soft, timeout=None, branching="activity") -> SolveResult:
    """Exact partial MaxSAT by UNSAT-to-SAT linear search over the objective."""
    start = time.monotonic()
    deadline = None if timeout is None else start + timeout
    solver = Solver(nvars, branching=branching)

    def stats():
        return {
            "decisions": solver.decisions,
            "propagations": solver.propagations,
            "conflicts": solver.conflicts,
            "wall_time": time.monotonic() - start,
        }

    for count, clause in enumerate(hard):
        if not solver.add_clause(clause):
            return SolveResult(Status.INFEASIBLE, stats=stats())
        if deadline is not None and count & 4095 == 0 and time.monotonic() > deadline:
            return SolveResult(Status.TIMEOUT, bound=sum(w for _, w in soft), stats=stats())
    violated = []
    for clause, weight in soft:
        if len(clause) == 1:
            flag = -clause[0]
        else:
            flag = solver.new_var()
            solver.add_clause(list(clause) + [flag])
        violated.extend([flag] * weight)
    total = len(violated)
    outs = _sequential_counter(solver, violated)

    for allowed in range(total + 1):
        assumptions = [-outs[allowed]] if allowed < total else []
        try:
            sat = solver.solve(assumptions, deadline)
        except Timeout:
            return SolveResult(Status.TIMEOUT, bound=total - allowed, stats=stats())
        if sat:
            model = np.array(solver.model[1 : nvars + 1], dtype=bool)
            objective = sum(w for c, w in soft if satisfies(c, model))
            return SolveResult(Status.OPTIMAL, objective, model, stats=stats())
        if not solver.ok:
            break
    return SolveResult(Status.INFEASIBLE, stats=stats())


def solve_builtin(inst: CnfInstance, timeout=None, branching="activity") -> SolveResult:
    return maxsat_linear(inst.var_count, inst.hard, inst.soft, timeout, branching)


def _resolve_command(solver_cmd):
    cmd = os.environ.get(SOLVER_ENV) or solver_cmd
    if not cmd:
        raise SolverError(f"no external solver given (set {SOLVER_ENV} or pass a command)")
    return shlex.split(cmd) if isinstance(cmd, str) else list(cmd)


def solve_external(inst: CnfInstance, solver_cmd=None, timeout=None) -> SolveResult:
    """Run an external WCNF solver on ``inst`` and check its model."""
    argv = _resolve_command(solver_cmd)
    start = time.monotonic()
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "instance.wcnf"
        path.write_text(format_wcnf(inst))
        try:
            proc = subprocess.run(
                argv + [str(path)], capture_output=True, text=True, timeout=timeout
            )
        except subprocess.TimeoutExpired:
            return SolveResult(Status.TIMEOUT, stats={"wall_time": time.monotonic() - start})
        except OSError as exc:
            raise SolverError(f"cannot run solver {argv[0]!r}: {exc}") from exc
    wall = time.monotonic() - start
    status_line = next(
        (ln[1:].strip() for ln in proc.stdout.splitlines() if ln.startswith("s ")), None
    )
    if status_line is None:
        raise SolverError(
            f"solver exited with code {proc.returncode} and no 's' line: {proc.stderr.strip()[:200]}"
        )
    if status_line.startswith("UNSAT"):
        return SolveResult(Status.INFEASIBLE, stats={"wall_time": wall})
    if not status_line.startswith("OPTIMUM"):
        if status_line.startswith("UNKNOWN"):
            return SolveResult(Status.TIMEOUT, stats={"wall_time": wall})
        raise SolverError(f"solver reported {status_line!r}")
    model = parse_model(proc.stdout, inst.var_count)
    for clause in inst.hard:
        if not satisfies(clause, model):
            raise IntegrityError(f"solver model violates hard clause {clause}")
    objective = sum(w for c, w in inst.soft if satisfies(c, model))
    costs = [int(ln.split()[1]) for ln in proc.stdout.splitlines() if ln.startswith("o ")]
    total = sum(w for _, w in inst.soft)
    if costs and costs[-1] != total - objective:
        raise IntegrityError(f"solver cost {costs[-1]} disagrees with its model ({total - objective})")
    return SolveResult(Status.OPTIMAL, objective, model, stats={"wall_time": wall})


# --- mining pipeline ----------------------------------------------------------


@dataclass
class MineResult:
    policy: DomainPolicy
    instantiation: Digraph
    objective: int
    m: int
    solve_result: SolveResult

    @property
    def n_domains(self) -> int:
        return self.policy.n_domains


def mine(psm: PartialMatrix, encoding="BE+NF+MD+LI", m=None, timeout=None,
         solver="builtin") -> MineResult:
    """Find an instantiation of ``psm`` with the fewest domains and its policy.

    ``encoding`` is an encoding name or an :class:`EncodingConfig`; ``m`` is
    the class budget (defaults to the cheaper constant fill).  ``solver`` is
    ``"builtin"`` or an external command line.
    """
    start = time.monotonic()
    if isinstance(encoding, EncodingConfig):
        config = encoding if m is None else encoding.with_m(m)
    else:
        config = EncodingConfig.from_name(encoding, m or default_class_budget(psm))
    inst = encode(psm, config)
    remaining = None if timeout is None else timeout - (time.monotonic() - start)
    if remaining is not None and remaining <= 0:
        raise SolveTimeout(timeout, None)
    if solver == "builtin":
        result = solve_builtin(inst, remaining)
    else:
        result = solve_external(inst, solver, remaining)
    if result.status is Status.INFEASIBLE:
        raise InfeasibleError(config.m)
    if result.status is Status.TIMEOUT:
        raise SolveTimeout(timeout, result.bound)
    decoded = decode(inst, result.assignment)
    if decoded.policy.n_domains != config.m - result.objective:
        raise IntegrityError(
            f"{decoded.policy.n_domains} domains decoded but objective implies "
            f"{config.m - result.objective}"
        )
    return MineResult(decoded.policy, decoded.instantiation, result.objective, config.m, result)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 1:
        print("usage: python -m domainminer.solve INSTANCE.wcnf", file=sys.stderr)
        return 64
    nvars, hard, soft = parse_wcnf(Path(argv[0]).read_text())
    result = maxsat_linear(nvars, hard, soft)
    if result.status is Status.INFEASIBLE:
        print("s UNSATISFIABLE")
        return 20
    cost = sum(w for _, w in soft) - result.objective
    print(f"o {cost}")
    print("s OPTIMUM FOUND")
    lits = [str(v + 1 if val else -(v + 1)) for v, val in enumerate(result.assignment)]
    print("v " + " ".join(lits))
    return 30


if __name__ == "__main__":
    sys.exit(main())
