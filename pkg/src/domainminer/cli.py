"""Command-line front end.

Every subcommand is a thin wrapper over the library.  Exit codes: 0 success,
2 infeasible at the requested class budget, 3 timeout, 64 usage or bad
input, 1 internal failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import shlex
import shutil
import sys
from pathlib import Path

from . import benchgen, evaluation, oracle, reductions
from .core import format_matrix, read_matrix
from .dte import mine_dte
from .encode import ENCODINGS, EncodingConfig, default_class_budget, encode, write_wcnf
from .errors import (
    DomainMinerError,
    EncodingConfigError,
    InfeasibleError,
    MatrixParseError,
    SizeLimitError,
    SolveTimeout,
    SolverError,
)
from .solve import SOLVER_ENV, mine
from .summary import summarize

EXIT_OK, EXIT_INTERNAL, EXIT_INFEASIBLE, EXIT_TIMEOUT, EXIT_USAGE = 0, 1, 2, 3, 64

log = logging.getLogger("domainminer")


class UsageError(DomainMinerError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(text, out=None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(doc, out=None):
    _emit(json.dumps(doc, indent=2) + "\n", out)


def _complete_digraph(path):
    psm = read_matrix(path)
    if not psm.is_complete:
        raise UsageError(f"{path}: {psm.n_stars} unspecified cells; use 'mine' for partial matrices")
    return psm.to_digraph()


def _config(name, m):
    try:
        return EncodingConfig.from_name(name, m)
    except EncodingConfigError as exc:
        raise UsageError(str(exc)) from None


def _check_solver(solver):
    if solver == "builtin":
        return
    cmd = os.environ.get(SOLVER_ENV) or solver
    argv = shlex.split(cmd)
    if not argv or shutil.which(argv[0]) is None:
        raise UsageError(f"solver command not found: {cmd!r}")


def cmd_summarize(args):
    policy, partition = summarize(_complete_digraph(args.matrix), n_jobs=args.jobs)
    doc = policy.to_dict()
    doc["classes"] = [list(c) for c in partition.classes]
    _dump(doc, args.output)


def cmd_mine(args):
    psm = read_matrix(args.matrix)
    m = args.m or default_class_budget(psm)
    config = _config(args.encoding, m)
    _check_solver(args.solver)
    res = mine(psm, encoding=config, timeout=args.timeout, solver=args.solver)
    doc = res.policy.to_dict()
    doc.update(encoding=config.name, m=res.m, objective=res.objective)
    _dump(doc, args.output)


def cmd_encode(args):
    psm = read_matrix(args.matrix)
    config = _config(args.encoding, args.m or default_class_budget(psm))
    inst = encode(psm, config)
    write_wcnf(inst, args.output)
    log.info("%d variables, %d hard and %d soft clauses", inst.var_count, len(inst.hard), len(inst.soft))


def cmd_dte(args):
    _dump(mine_dte(_complete_digraph(args.matrix)).to_dict(), args.output)


def cmd_reduce(args):
    if args.source == "db-dtepm":
        if args.m is None:
            raise UsageError("--m is required for db-dtepm")
        m, psm = reductions.db_to_dtepm(args.m, read_matrix(args.input))
    else:
        h = reductions.read_graph(args.input)
        build = reductions.three_color_to_dbpm if args.source == "3col-dbpm" else reductions.three_color_to_db
        m, psm = build(h)
    _emit(f"# class budget m = {m}\n" + format_matrix(psm), args.output)
    if args.output:
        print(json.dumps({"m": m, "entities": psm.n, "rights": psm.k}))


def cmd_oracle(args):
    psm = read_matrix(args.matrix)
    fn = {"dbpm": oracle.dbpm_optimum, "db": oracle.db_optimum, "dtepm": oracle.dtepm_optimum}
    print(json.dumps({"problem": args.problem, "optimum": fn[args.problem](psm)}))


def cmd_gen_bench(args):
    grid = dict(benchgen.DESK_GRID if args.grid == "desk" else benchgen.FULL_GRID)
    if args.m_star:
        grid["m_star_set"] = tuple(args.m_star)
    if args.n:
        grid["n_set"] = tuple(args.n)
    if args.per_cell:
        grid["per_cell"] = args.per_cell
    instances = benchgen.suite(seed=args.seed, edge_prob=args.edge_prob,
                               star_frac=args.star_frac, **grid)
    manifest = benchgen.write_suite(instances, args.output)
    print(f"{len(instances)} instances, manifest {manifest}")


def cmd_eval(args):
    rows = benchgen.read_manifest(args.manifest)
    for name in args.encodings:
        _config(name, 1)
    _check_solver(args.solver)
    results = evaluation.run_eval(rows, args.encodings, timeout=args.timeout,
                                  workers=args.workers, solver=args.solver)
    evaluation.write_results(results, args.output)
    print(f"{'encoding':<14}{'solved':>8}{'seconds':>12}")
    for enc, solved, total in evaluation.summary_table(results):
        print(f"{enc:<14}{solved:>8}{total:>12.2f}")


def build_parser():
    p = _Parser(prog="domainminer", description="Mine domain-based access-control policies.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("summarize", help="summary policy of a complete matrix")
    s.add_argument("matrix")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_summarize)

    s = sub.add_parser("mine", help="fewest-domain policy of a partial matrix")
    s.add_argument("matrix")
    s.add_argument("--m", type=int, help="class budget (default: cheaper constant fill)")
    s.add_argument("--encoding", default="BE+NF+MD+LI", help="one of " + ", ".join(ENCODINGS))
    s.add_argument("--solver", default="builtin", help="'builtin' or a WCNF solver command")
    s.add_argument("--timeout", type=float)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_mine)

    s = sub.add_parser("encode", help="write the MaxSAT instance as WCNF")
    s.add_argument("matrix")
    s.add_argument("--encoding", default="BE+NF+MD+LI")
    s.add_argument("--m", type=int)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_encode)

    s = sub.add_parser("dte", help="optimal DTE policy of a complete matrix")
    s.add_argument("matrix")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_dte)

    s = sub.add_parser("reduce", help="build a reduction instance")
    s.add_argument("--from", dest="source", required=True, choices=("3col-dbpm", "3col-db", "db-dtepm"))
    s.add_argument("input", help="graph file, or matrix file for db-dtepm")
    s.add_argument("--m", type=int, help="DB bound (db-dtepm only)")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("oracle", help="exact optimum by enumeration (tiny inputs)")
    s.add_argument("matrix")
    s.add_argument("--problem", choices=("dbpm", "db", "dtepm"), default="dbpm")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("gen-bench", help="generate a seeded benchmark suite")
    s.add_argument("-o", "--output", required=True, help="output directory")
    s.add_argument("--grid", choices=("desk", "full"), default="desk")
    s.add_argument("--m-star", type=int, nargs="+")
    s.add_argument("--n", type=int, nargs="+")
    s.add_argument("--per-cell", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--edge-prob", type=float, default=0.5)
    s.add_argument("--star-frac", type=float, default=0.10)
    s.set_defaults(func=cmd_gen_bench)

    s = sub.add_parser("eval", help="run encodings over a manifest")
    s.add_argument("--manifest", required=True)
    s.add_argument("--encodings", nargs="+", default=list(ENCODINGS))
    s.add_argument("--timeout", type=float, default=60.0)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--solver", default="builtin")
    s.add_argument("-o", "--output", default="eval_out")
    s.set_defaults(func=cmd_eval)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        args.func(args)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except SolveTimeout as exc:
        print(f"timeout: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT
    except (UsageError, MatrixParseError, SizeLimitError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverError, DomainMinerError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
