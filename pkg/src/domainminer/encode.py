"""Partial MaxSAT encodings of domain-based policy mining.

A partial matrix over ``n`` entities and ``k`` rights is encoded with ``m``
class placeholders.  Variables:

* ``x[(i, a, j)]``: value chosen for the star cell ``(i, a, j)``
* ``y[(i, p)]``: entity ``i`` is assigned to class ``p``
* ``z[(p, a, q)]``: class ``p`` holds right ``a`` over class ``q``
* ``r[p]``: class ``p`` is occupied
* ``l[(i, p)]``: ``i`` is the lowest entity in class ``p`` (FM / MD only)
* ``ladder[(i, j)]``: ladder auxiliaries of entity ``i`` (CC only)

Hard clause families are keyed ``"1"`` ... ``"15"`` plus ``"ladder"``; the
soft clauses ``(-r[p])`` reward unoccupied classes.

Refinements on top of the baseline (BE):

``CC``  exactly-one per entity via the ladder encoding instead of (1)+(2)
``NF``  drop the at-most-one clauses (2)
``FM``  sorted class minima, clauses (10)-(13)
``MD``  sorted class minima, clauses (10)-(12) and (14)
``LI``  occupied classes form a prefix, clause (15)
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import ONE, STAR, ZERO, Digraph, DomainPolicy, PartialMatrix, enforces
from .errors import EncodingConfigError, IntegrityError, SolverError
from .summary import summarize

FLAGS = ("CC", "NF", "FM", "MD", "LI")

#: The six encodings benchmarked as named configurations.
ENCODINGS = (
    "BE",
    "BE+CC",
    "BE+NF",
    "BE+NF+FM",
    "BE+NF+MD",
    "BE+NF+MD+LI",
)


@dataclass(frozen=True)
class EncodingConfig:
    m: int
    cc: bool = False
    nf: bool = False
    fm: bool = False
    md: bool = False
    li: bool = False

    def __post_init__(self):
        if self.m < 1:
            raise EncodingConfigError(f"class budget m must be >= 1, got {self.m}")
        if self.cc and self.nf:
            raise EncodingConfigError("CC and NF are mutually exclusive")
        if self.fm and self.md:
            raise EncodingConfigError("FM and MD are mutually exclusive")

    @classmethod
    def from_name(cls, name: str, m: int) -> "EncodingConfig":
        parts = [p.strip().upper() for p in name.split("+")]
        if not parts or parts[0] != "BE":
            raise EncodingConfigError(f"encoding name must start with 'BE': {name!r}")
        flags = parts[1:]
        unknown = [f for f in flags if f not in FLAGS]
        if unknown:
            raise EncodingConfigError(f"unknown encoding flags {unknown} in {name!r}")
        if len(set(flags)) != len(flags):
            raise EncodingConfigError(f"repeated flag in {name!r}")
        return cls(m, **{f.lower(): True for f in flags})

    @property
    def name(self) -> str:
        return "+".join(["BE"] + [f for f in FLAGS if getattr(self, f.lower())])

    @property
    def uses_mins(self) -> bool:
        return self.fm or self.md

    def with_m(self, m: int) -> "EncodingConfig":
        return EncodingConfig(m, self.cc, self.nf, self.fm, self.md, self.li)


class VarRegistry:
    """Dense numbering ``1..V`` of the encoding's variables, with inverse lookup."""

    ROLES = ("x", "y", "z", "r", "l", "ladder")

    def __init__(self):
        self.count = 0
        self.maps = {role: {} for role in self.ROLES}
        self._inverse = [None]

    def new(self, role, key):
        table = self.maps[role]
        if key in table:
            raise KeyError(f"{role}{key} registered twice")
        self.count += 1
        table[key] = self.count
        self._inverse.append((role, key))
        return self.count

    def role_of(self, var):
        """``(role, key)`` for a variable id."""
        if not 1 <= var <= self.count:
            raise KeyError(f"unknown variable {var}")
        return self._inverse[var]

    def __getattr__(self, role):
        if role in VarRegistry.ROLES:
            return self.maps[role]
        raise AttributeError(role)


@dataclass(frozen=True)
class CnfInstance:
    psm: PartialMatrix
    config: EncodingConfig
    registry: VarRegistry
    hard: list
    soft: list
    family_counts: dict = field(default_factory=dict)

    @property
    def var_count(self) -> int:
        return self.registry.count

    @property
    def top(self) -> int:
        return len(self.soft) + 1


def default_class_budget(psm: PartialMatrix) -> int:
    """Class count of the cheaper of the all-zero and all-one instantiations."""
    return min(summarize(psm.fill_constant(b))[0].n_domains for b in (False, True))


def _clause(*lits):
    # drop repeated literals (i == j or p == q) while keeping order
    return tuple(dict.fromkeys(lits))


def encode(psm: PartialMatrix, config: EncodingConfig) -> CnfInstance:
    n, k, m = psm.n, psm.k, config.m
    reg = VarRegistry()
    for i, a, j in psm.star_cells.tolist():
        reg.new("x", (i, a, j))
    for i in range(n):
        for p in range(m):
            reg.new("y", (i, p))
    for p in range(m):
        for a in range(k):
            for q in range(m):
                reg.new("z", (p, a, q))
    for p in range(m):
        reg.new("r", p)
    if config.uses_mins:
        for i in range(n):
            for p in range(m):
                reg.new("l", (i, p))
    if config.cc:
        for i in range(n):
            for j in range(m - 1):
                reg.new("ladder", (i, j))

    X, Y, Z, R, L, S = (reg.maps[r] for r in VarRegistry.ROLES)
    hard = []
    counts = {}

    def emit(family, clause):
        hard.append(clause)
        counts[family] = counts.get(family, 0) + 1

    if config.cc:
        for i in range(n):
            for clause in ladder_exactly_one([Y[i, p] for p in range(m)],
                                             [S[i, j] for j in range(m - 1)]):
                emit("ladder", clause)
    else:
        for i in range(n):
            emit("1", tuple(Y[i, p] for p in range(m)))
        if not config.nf:
            for i in range(n):
                for p in range(m):
                    for q in range(p + 1, m):
                        emit("2", (-Y[i, p], -Y[i, q]))

    cells = psm.cells
    for i in range(n):
        for a in range(k):
            for j in range(n):
                val = cells[i, a, j]
                xv = X.get((i, a, j))
                for p in range(m):
                    yip = -Y[i, p]
                    for q in range(m):
                        yjq = -Y[j, q]
                        z = Z[p, a, q]
                        if val == ZERO:
                            emit("3", _clause(yip, yjq, -z))
                        elif val == ONE:
                            emit("4", _clause(yip, yjq, z))
                        else:
                            emit("5", _clause(yip, yjq, xv, -z))
                            emit("6", _clause(yip, yjq, -xv, z))

    for i in range(n):
        for p in range(m):
            emit("7", (-Y[i, p], R[p]))

    if config.uses_mins:
        for p in range(m):
            for q in range(p + 1, m):
                for i in range(n):
                    for j in range(i + 1):
                        emit("10", (-L[i, p], -L[j, q]))
        for p in range(m):
            for i in range(n):
                for j in range(i + 1, n):
                    emit("11", (-Y[i, p], -L[j, p]))
        for i in range(n):
            for p in range(m):
                emit("12", (-L[i, p], Y[i, p]))
        if config.fm:
            for i in range(n):
                for p in range(m):
                    emit("13", (-Y[i, p],) + tuple(L[j, p] for j in range(i + 1)))
        else:
            for p in range(m):
                emit("14", (-R[p],) + tuple(L[j, p] for j in range(n)))

    if config.li:
        for p in range(m - 1):
            emit("15", (R[p], -R[p + 1]))

    soft = [((-R[p],), 1) for p in range(m)]
    return CnfInstance(psm, config, reg, hard, soft, counts)


def ladder_exactly_one(xs, aux):
    """Ladder encoding of ``sum(xs) == 1``.

    ``aux[j]`` reads "the selected index is greater than ``j``"; needs
    ``len(xs) - 1`` auxiliaries and emits ``4 * len(xs) - 4`` clauses.
    """
    m = len(xs)
    if len(aux) != m - 1:
        raise ValueError("ladder needs len(xs) - 1 auxiliaries")
    if m == 1:
        return [(xs[0],)]
    out = []
    for j in range(m - 2):
        out.append((-aux[j + 1], aux[j]))
    out.append((xs[0], aux[0]))
    out.append((-xs[0], -aux[0]))
    for j in range(1, m - 1):
        out.append((-xs[j], aux[j - 1]))
        out.append((-xs[j], -aux[j]))
        out.append((xs[j], -aux[j - 1], aux[j]))
    out.append((-xs[m - 1], aux[m - 2]))
    out.append((xs[m - 1], -aux[m - 2]))
    return out


# --- WCNF exchange ------------------------------------------------------------


def format_wcnf(inst: CnfInstance) -> str:
    top = inst.top
    buf = io.StringIO()
    buf.write(f"p wcnf {inst.var_count} {len(inst.hard) + len(inst.soft)} {top}\n")
    for clause in inst.hard:
        buf.write(f"{top} {' '.join(map(str, clause))} 0\n")
    for clause, weight in inst.soft:
        buf.write(f"{weight} {' '.join(map(str, clause))} 0\n")
    return buf.getvalue()


def write_wcnf(inst: CnfInstance, path) -> None:
    Path(path).write_text(format_wcnf(inst))


def parse_wcnf(text: str):
    """Parse WCNF text into ``(nvars, hard, soft)``.

    Accepts the classic ``p wcnf`` header format and the header-less format
    with ``h`` marking hard clauses.  ``soft`` holds ``(clause, weight)`` pairs.
    """
    nvars = 0
    top = None
    hard, soft = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        toks = line.split()
        if toks[0] == "p":
            if len(toks) < 4 or toks[1] != "wcnf":
                raise SolverError(f"line {lineno}: bad header {line!r}")
            nvars = int(toks[2])
            top = int(toks[4]) if len(toks) > 4 else None
            continue
        if toks[-1] != "0":
            raise SolverError(f"line {lineno}: clause not terminated by 0")
        lits = tuple(int(t) for t in toks[1:-1])
        nvars = max([nvars] + [abs(x) for x in lits])
        if toks[0] == "h" or (top is not None and int(toks[0]) >= top):
            hard.append(lits)
        else:
            soft.append((lits, int(toks[0])))
    return nvars, hard, soft


def read_wcnf(path):
    return parse_wcnf(Path(path).read_text())


def parse_model(text: str, nvars: int) -> np.ndarray:
    """Boolean assignment from solver ``v`` lines; index ``v - 1`` holds variable ``v``.

    Understands both literal lists (``v 1 -2 3 0``) and bit strings
    (``v 100``).  Variables never mentioned default to false.
    """
    model = np.zeros(nvars, dtype=bool)
    found = False
    for line in text.splitlines():
        if not line.startswith("v"):
            continue
        found = True
        toks = line[1:].split()
        if len(toks) == 1 and set(toks[0]) <= {"0", "1"} and len(toks[0]) > 1:
            bits = toks[0]
            if len(bits) > nvars:
                raise SolverError(f"model has {len(bits)} values, instance has {nvars} variables")
            model[: len(bits)] = [b == "1" for b in bits]
            continue
        for tok in toks:
            lit = int(tok)
            if lit == 0:
                continue
            if abs(lit) > nvars:
                raise SolverError(f"model references unknown variable {abs(lit)}")
            model[abs(lit) - 1] = lit > 0
    if not found:
        raise SolverError("solver output has no 'v' line")
    return model


def read_model(path, nvars: int) -> np.ndarray:
    return parse_model(Path(path).read_text(), nvars)


# --- decoding -----------------------------------------------------------------


@dataclass(frozen=True)
class Decoded:
    instantiation: Digraph
    policy: DomainPolicy
    occupied_count: int  # r-literals; exact only when the model is optimal
    classes: tuple  # placeholder index of each domain


def satisfies(clause, model) -> bool:
    return any(model[abs(l) - 1] == (l > 0) for l in clause)


def decode(inst: CnfInstance, model) -> Decoded:
    """Read the instantiation and policy out of a model satisfying the hard clauses.

    Each entity goes to its lowest true class (several may hold under NF).
    The result is re-verified; a violated clause or triple raises
    :class:`IntegrityError`.
    """
    model = np.asarray(model, dtype=bool)
    if len(model) != inst.var_count:
        raise IntegrityError(f"model covers {len(model)} variables, expected {inst.var_count}")
    for clause in inst.hard:
        if not satisfies(clause, model):
            raise IntegrityError(f"hard clause {clause} is violated")
    psm, reg, m = inst.psm, inst.registry, inst.config.m

    adj = psm.cells == ONE
    for (i, a, j), var in reg.x.items():
        adj[i, a, j] = model[var - 1]
    instantiation = Digraph.from_array(adj)

    cls = []
    for i in range(psm.n):
        chosen = [p for p in range(m) if model[reg.y[i, p] - 1]]
        if not chosen:
            raise IntegrityError(f"entity {i} is assigned to no class")
        cls.append(chosen[0])
    used = sorted(set(cls))
    index = {p: d for d, p in enumerate(used)}
    zadj = np.zeros((len(used), psm.k, len(used)), dtype=bool)
    for (p, a, q), var in reg.z.items():
        if p in index and q in index:
            zadj[index[p], a, index[q]] = model[var - 1]
    policy = DomainPolicy(Digraph.from_array(zadj), [index[p] for p in cls])
    if not enforces(policy, instantiation):
        bad = np.argwhere(policy.expand().adj != instantiation.adj)[0]
        raise IntegrityError(f"decoded policy misjudges request {tuple(bad.tolist())}")
    occupied = int(sum(model[reg.r[p] - 1] for p in range(m)))
    return Decoded(instantiation, policy, occupied, tuple(used))
