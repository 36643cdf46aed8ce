"""A small CDCL SAT solver with two watched literals and solving under assumptions.

Literals are DIMACS integers at the API; internally literal ``v`` is coded
``2*v`` and ``-v`` is ``2*v + 1``.  Decisions pick the unassigned variable
with the highest activity (ties to the lowest index) and try false first,
so runs are fully reproducible.
"""
from __future__ import annotations

import heapq
import time


class Timeout(Exception):
    pass


def _luby(i):
    # i-th element (1-based) of the Luby sequence
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    while i != (1 << k) - 1:
        i -= (1 << (k - 1)) - 1
        k = 1
        while (1 << k) - 1 < i:
            k += 1
    return 1 << (k - 1)


class Solver:
    def __init__(self, nvars=0, branching="activity"):
        if branching not in ("activity", "lowest"):
            raise ValueError(f"unknown branching rule {branching!r}")
        self.branching = branching
        self.nvars = 0
        self.value = [0, 0]  # per literal code: 1 true, -1 false, 0 free
        self.level = [0]
        self.reason = [None]
        self.activity = [0.0]
        self.seen = [False]
        self.watches = [[], []]  # clauses to visit when the literal becomes false
        self.bins = [[], []]  # (implied literal, clause) for binary clauses
        self.trail = []
        self.trail_lim = []
        self.qhead = 0
        self.heap = []
        self.learnts = []
        self.var_inc = 1.0
        self.ok = True
        self.decisions = 0
        self.propagations = 0
        self.conflicts = 0
        self.model = None
        self.ensure_vars(nvars)

    # -- construction -----------------------------------------------------

    def ensure_vars(self, nvars):
        while self.nvars < nvars:
            self.nvars += 1
            self.value += [0, 0]
            self.level.append(0)
            self.reason.append(None)
            self.activity.append(0.0)
            self.seen.append(False)
            self.watches += [[], []]
            self.bins += [[], []]
            heapq.heappush(self.heap, (0.0, self.nvars))

    def new_var(self):
        self.ensure_vars(self.nvars + 1)
        return self.nvars

    @staticmethod
    def _code(lit):
        return (lit << 1) if lit > 0 else ((-lit) << 1) | 1

    def add_clause(self, lits):
        """Add a clause at decision level 0; returns False once the formula is UNSAT."""
        if not self.ok:
            return False
        if self.trail_lim:
            self._backtrack(0)
        value = self.value
        codes = []
        for lit in lits:
            if lit > 0:
                c = lit << 1
            elif lit < 0:
                c = ((-lit) << 1) | 1
            else:
                raise ValueError("literal 0 is not allowed")
            if (c >> 1) > self.nvars:
                self.ensure_vars(c >> 1)
                value = self.value
            if value[c] == 1 or (c ^ 1) in codes:
                return True  # satisfied or tautological
            if value[c] == -1 or c in codes:
                continue
            codes.append(c)
        if not codes:
            self.ok = False
            return False
        if len(codes) == 1:
            self._assign(codes[0], None)
            if self._propagate() is not None:
                self.ok = False
            return self.ok
        self._attach(codes)
        return True

    def _attach(self, clause):
        if len(clause) == 2:
            a, b = clause
            self.bins[a].append((b, clause))
            self.bins[b].append((a, clause))
        else:
            self.watches[clause[0]].append(clause)
            self.watches[clause[1]].append(clause)

    # -- core -------------------------------------------------------------

    def _assign(self, code, reason):
        v = code >> 1
        self.value[code] = 1
        self.value[code ^ 1] = -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(code)

    def _backtrack(self, lvl):
        if len(self.trail_lim) <= lvl:
            return
        value, reason, heap, act = self.value, self.reason, self.heap, self.activity
        stop = self.trail_lim[lvl]
        for code in reversed(self.trail[stop:]):
            value[code] = 0
            value[code ^ 1] = 0
            v = code >> 1
            reason[v] = None
            heapq.heappush(heap, (-act[v], v))
        del self.trail[stop:]
        del self.trail_lim[lvl:]
        self.qhead = len(self.trail)
        if len(heap) > 4 * self.nvars + 1024:
            self.heap = [(-act[v], v) for v in range(1, self.nvars + 1) if value[v << 1] == 0]
            heapq.heapify(self.heap)

    def _propagate(self):
        """Unit propagation; returns a conflicting clause or None."""
        value, trail, watches, bins = self.value, self.trail, self.watches, self.bins
        level, reason = self.level, self.reason
        dl = len(self.trail_lim)
        qhead = self.qhead
        conflict = None
        while qhead < len(trail):
            false_lit = trail[qhead] ^ 1
            qhead += 1
            for other, clause in bins[false_lit]:
                val = value[other]
                if val == 1:
                    continue
                if val == -1:
                    conflict = clause
                    break
                value[other] = 1
                value[other ^ 1] = -1
                level[other >> 1] = dl
                reason[other >> 1] = clause
                trail.append(other)
            if conflict is not None:
                break
            ws = watches[false_lit]
            kept = []
            n_ws = len(ws)
            idx = 0
            while idx < n_ws:
                clause = ws[idx]
                idx += 1
                if not clause:
                    continue  # deleted learnt clause
                if clause[0] == false_lit:
                    clause[0] = clause[1]
                    clause[1] = false_lit
                first = clause[0]
                if value[first] == 1:
                    kept.append(clause)
                    continue
                for pos in range(2, len(clause)):
                    lit = clause[pos]
                    if value[lit] != -1:
                        clause[1] = lit
                        clause[pos] = false_lit
                        watches[lit].append(clause)
                        break
                else:
                    kept.append(clause)
                    if value[first] == -1:
                        conflict = clause
                        kept.extend(ws[idx:])
                        break
                    value[first] = 1
                    value[first ^ 1] = -1
                    level[first >> 1] = dl
                    reason[first >> 1] = clause
                    trail.append(first)
            watches[false_lit] = kept
            if conflict is not None:
                break
        self.propagations += qhead - self.qhead
        self.qhead = qhead if conflict is None else len(trail)
        return conflict

    def _bump(self, v):
        act = self.activity
        act[v] += self.var_inc
        if act[v] > 1e100:
            for i in range(1, self.nvars + 1):
                act[i] *= 1e-100
            self.var_inc *= 1e-100
            self.heap = [(-act[i], i) for i in range(1, self.nvars + 1) if self.value[i << 1] == 0]
            heapq.heapify(self.heap)
        elif self.value[v << 1] == 0:
            heapq.heappush(self.heap, (-act[v], v))

    def _analyze(self, conflict):
        seen, level, reason, trail = self.seen, self.level, self.reason, self.trail
        dl = len(self.trail_lim)
        learnt = [0]
        to_clear = []
        pending = 0
        p = None
        idx = len(trail) - 1
        clause = conflict
        while True:
            for q in clause:
                if q == p:
                    continue
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    seen[v] = True
                    to_clear.append(v)
                    self._bump(v)
                    if level[v] >= dl:
                        pending += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            clause = reason[p >> 1]
            seen[p >> 1] = False  # resolved away; only learnt literals stay marked
            pending -= 1
            if pending == 0:
                break
        learnt[0] = p ^ 1

        # drop literals implied by the rest of the clause
        keep = [learnt[0]]
        for q in learnt[1:]:
            r = reason[q >> 1]
            if r is None or any(
                not seen[w >> 1] and level[w >> 1] > 0 for w in r if w != (q ^ 1)
            ):
                keep.append(q)
        learnt = keep
        for v in to_clear:
            seen[v] = False

        if len(learnt) == 1:
            return learnt, 0
        best = max(range(1, len(learnt)), key=lambda i: level[learnt[i] >> 1])
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, level[learnt[1] >> 1]

    def _pick_branch(self):
        value = self.value
        if self.branching == "lowest":
            for v in range(1, self.nvars + 1):
                if value[v << 1] == 0:
                    return v
            return None
        heap, act = self.heap, self.activity
        while heap:
            negact, v = heapq.heappop(heap)
            if value[v << 1] == 0 and -negact == act[v]:
                return v
        return None

    def _reduce_db(self):
        reason = self.reason
        locked = {id(reason[c >> 1]) for c in self.trail if reason[c >> 1] is not None}
        self.learnts.sort(key=len)
        half = len(self.learnts) // 2
        kept = self.learnts[:half]
        for clause in self.learnts[half:]:
            if len(clause) > 2 and id(clause) not in locked:
                clause.clear()
            else:
                kept.append(clause)
        self.learnts = kept

    # -- public -----------------------------------------------------------

    def solve(self, assumptions=(), deadline=None):
        """Search for a model extending ``assumptions``.

        Returns True (model in :attr:`model`) or False.  Raises
        :class:`Timeout` when the ``time.monotonic()`` deadline passes.
        """
        self.model = None
        if not self.ok:
            return False
        self._backtrack(0)
        if self._propagate() is not None:
            self.ok = False
            return False
        assume = [self._code(a) for a in assumptions]
        for a in assumptions:
            self.ensure_vars(abs(a))
        restart_no = 1
        restart_budget = 100 * _luby(restart_no)
        since_restart = 0
        max_learnts = max(2000, len(self.learnts) * 2)
        ticks = 0
        while True:
            ticks += 1
            if deadline is not None and ticks & 63 == 0 and time.monotonic() > deadline:
                self._backtrack(0)
                raise Timeout()
            conflict = self._propagate()
            if conflict is not None:
                self.conflicts += 1
                since_restart += 1
                if len(self.trail_lim) == 0:
                    self.ok = False
                    return False
                learnt, bt_level = self._analyze(conflict)
                self._backtrack(bt_level)
                if len(learnt) == 1:
                    self._assign(learnt[0], None)
                else:
                    self._attach(learnt)
                    self.learnts.append(learnt)
                    self._assign(learnt[0], learnt)
                self.var_inc /= 0.95
                continue
            if since_restart >= restart_budget:
                since_restart = 0
                restart_no += 1
                restart_budget = 100 * _luby(restart_no)
                self._backtrack(0)
                continue
            if len(self.learnts) > max_learnts:
                self._reduce_db()
                max_learnts = int(max_learnts * 1.1)
            dl = len(self.trail_lim)
            if dl < len(assume):
                p = assume[dl]
                if self.value[p] == -1:
                    self._backtrack(0)
                    return False
                self.trail_lim.append(len(self.trail))
                if self.value[p] == 0:
                    self._assign(p, None)
                continue
            v = self._pick_branch()
            if v is None:
                value = self.value
                self.model = [False] + [value[i << 1] == 1 for i in range(1, self.nvars + 1)]
                self._backtrack(0)
                return True
            self.decisions += 1
            self.trail_lim.append(len(self.trail))
            self._assign((v << 1) | 1, None)
