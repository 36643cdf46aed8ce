"""Mining domain-based access-control policies.

Complete matrices are summarized exactly in polynomial time; partially
specified matrices are mined through a partial MaxSAT encoding.
"""
from .core import (
    ONE,
    STAR,
    ZERO,
    Digraph,
    DomainPolicy,
    PartialMatrix,
    enforces,
    instantiate,
    parse_matrix,
    read_matrix,
    write_matrix,
)
from .dte import DtePolicy, counts, dte_enforces, mine_dte
from .encode import ENCODINGS, EncodingConfig, decode, encode
from .errors import (
    ArityError,
    DomainMinerError,
    InfeasibleError,
    IntegrityError,
    MatrixParseError,
    SizeLimitError,
    SolverError,
    SolveTimeout,
)
from .solve import MineResult, SolveResult, Status, mine, solve_builtin, solve_external
from .summary import EquivalencePartition, indistinguishable, summarize

__version__ = "0.1.0"

_ESTIMATORS = ("DomainPolicyMiner", "DomainSummarizer", "DtePolicyMiner")


def __getattr__(name):
    # scikit-learn is slow to import; load the estimators on first use
    if name in _ESTIMATORS:
        from . import estimators

        return getattr(estimators, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")

__all__ = [
    "ONE", "STAR", "ZERO", "Digraph", "DomainPolicy", "PartialMatrix", "enforces",
    "instantiate", "parse_matrix", "read_matrix", "write_matrix",
    "DtePolicy", "counts", "dte_enforces", "mine_dte",
    "ENCODINGS", "EncodingConfig", "decode", "encode",
    "ArityError", "DomainMinerError", "InfeasibleError", "IntegrityError",
    "MatrixParseError", "SizeLimitError", "SolverError", "SolveTimeout",
    "DomainPolicyMiner", "DomainSummarizer", "DtePolicyMiner",
    "MineResult", "SolveResult", "Status", "mine", "solve_builtin", "solve_external",
    "EquivalencePartition", "indistinguishable", "summarize",
]
