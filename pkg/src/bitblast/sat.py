"""A small complete CDCL SAT solver.

First-UIP clause learning, two watched literals, Luby restarts, and
phase saving whose initial phases come from the polarity policy
(zeros: decide false first, ones: true first, random: seeded).  The
policies are decision preferences only, not guaranteed extremal
models.  Runs are deterministic for a fixed seed and budget.
"""

import random
from heapq import heappop, heappush

from .errors import SatBudgetExceeded

SAT = "sat"
UNSAT = "unsat"
BUDGET = "budget"

_RESTART_BASE = 64
_ACT_RESCALE = 1e100


def _luby(i):
    """0-indexed Luby value: 1 1 2 1 1 2 4 1 1 2 1 1 2 4 8 ..."""
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) // 2
        seq -= 1
        i = i % size
    return 1 << seq


class _Solver:
    def __init__(self, num_vars, polarity, seed):
        n = num_vars
        self.nvars = n
        self.assign = [None] * (n + 1)
        self.level = [0] * (n + 1)
        self.reason = [None] * (n + 1)
        self.trail = []
        self.lim = []
        self.qhead = 0
        self.watches = {}
        self.clauses = []
        self.activity = [0.0] * (n + 1)
        self.var_inc = 1.0
        self.heap = []
        self.seen = [False] * (n + 1)
        self.ok = True
        rng = random.Random(seed)
        if polarity == "zeros":
            self.phase = [False] * (n + 1)
        elif polarity == "ones":
            self.phase = [True] * (n + 1)
        elif polarity == "random":
            self.phase = [rng.random() < 0.5 for _ in range(n + 1)]
        else:
            raise ValueError("unknown polarity policy %r" % (polarity,))
        for v in range(1, n + 1):
            heappush(self.heap, (0.0, v))

    # -- assignment plumbing --------------------------------------------

    def value(self, lit):
        a = self.assign[abs(lit)]
        if a is None:
            return None
        return a if lit > 0 else not a

    def enqueue(self, lit, reason):
        v = abs(lit)
        val = lit > 0
        cur = self.assign[v]
        if cur is not None:
            return cur == val
        self.assign[v] = val
        self.level[v] = len(self.lim)
        self.reason[v] = reason
        self.trail.append(lit)
        return True

    def _watch(self, lit, clause):
        self.watches.setdefault(lit, []).append(clause)

    def add_clause(self, lits):
        if not self.ok:
            return
        seen = set()
        out = []
        for l in lits:
            if -l in seen:
                return  # tautology
            if l in seen:
                continue
            seen.add(l)
            out.append(l)
        if not out:
            self.ok = False
            return
        if len(out) == 1:
            if not self.enqueue(out[0], None):
                self.ok = False
            return
        self.clauses.append(out)
        self._watch(out[0], out)
        self._watch(out[1], out)

    # -- search ----------------------------------------------------------

    def propagate(self):
        while self.qhead < len(self.trail):
            p = self.trail[self.qhead]
            self.qhead += 1
            neg = -p
            ws = self.watches.get(neg)
            if not ws:
                continue
            keep = []
            i = 0
            n = len(ws)
            while i < n:
                clause = ws[i]
                i += 1
                if clause[0] == neg:
                    clause[0], clause[1] = clause[1], clause[0]
                first = clause[0]
                if self.value(first) is True:
                    keep.append(clause)
                    continue
                moved = False
                for k in range(2, len(clause)):
                    lk = clause[k]
                    if self.value(lk) is not False:
                        clause[1] = lk
                        clause[k] = neg
                        self._watch(lk, clause)
                        moved = True
                        break
                if moved:
                    continue
                keep.append(clause)
                if self.value(first) is False:
                    keep.extend(ws[i:])
                    self.watches[neg] = keep
                    return clause
                self.enqueue(first, clause)
            self.watches[neg] = keep
        return None

    def bump(self, v):
        act = self.activity[v] + self.var_inc
        self.activity[v] = act
        if act > _ACT_RESCALE:
            for u in range(1, self.nvars + 1):
                self.activity[u] *= 1e-100
            self.var_inc *= 1e-100
            act = self.activity[v]
        heappush(self.heap, (-act, v))

    def analyze(self, confl):
        seen = self.seen
        touched = []
        learnt = [None]
        counter = 0
        p = None
        index = len(self.trail)
        cur_level = len(self.lim)
        c = confl
        while True:
            for q in (c if p is None else c[1:]):
                v = abs(q)
                if not seen[v] and self.level[v] > 0:
                    seen[v] = True
                    touched.append(v)
                    self.bump(v)
                    if self.level[v] >= cur_level:
                        counter += 1
                    else:
                        learnt.append(q)
            while True:
                index -= 1
                p = self.trail[index]
                if seen[abs(p)]:
                    break
            counter -= 1
            if counter == 0:
                break
            c = self.reason[abs(p)]
        for v in touched:
            seen[v] = False
        learnt[0] = -p
        if len(learnt) == 1:
            return learnt, 0
        max_i = 1
        for i in range(2, len(learnt)):
            if self.level[abs(learnt[i])] > self.level[abs(learnt[max_i])]:
                max_i = i
        learnt[1], learnt[max_i] = learnt[max_i], learnt[1]
        return learnt, self.level[abs(learnt[1])]

    def backtrack(self, target):
        if len(self.lim) <= target:
            return
        bound = self.lim[target]
        for lit in reversed(self.trail[bound:]):
            v = abs(lit)
            self.phase[v] = lit > 0
            self.assign[v] = None
            self.reason[v] = None
            heappush(self.heap, (-self.activity[v], v))
        del self.trail[bound:]
        del self.lim[target:]
        self.qhead = bound

    def decide(self):
        while self.heap:
            negact, v = heappop(self.heap)
            if self.assign[v] is None and -negact == self.activity[v]:
                self.lim.append(len(self.trail))
                self.enqueue(v if self.phase[v] else -v, None)
                return True
        # stale entries only; rebuild for any unassigned stragglers
        for v in range(1, self.nvars + 1):
            if self.assign[v] is None:
                self.lim.append(len(self.trail))
                self.enqueue(v if self.phase[v] else -v, None)
                return True
        return False

    def search(self, conflict_budget):
        if not self.ok:
            return UNSAT, None
        conflicts = 0
        restarts = 0
        since_restart = 0
        limit = _RESTART_BASE * _luby(restarts)
        while True:
            confl = self.propagate()
            if confl is not None:
                if not self.lim:
                    return UNSAT, None
                conflicts += 1
                since_restart += 1
                if conflict_budget is not None and conflicts > conflict_budget:
                    return BUDGET, None
                learnt, bt = self.analyze(confl)
                self.backtrack(bt)
                if len(learnt) == 1:
                    if not self.enqueue(learnt[0], None):
                        return UNSAT, None
                else:
                    self.clauses.append(learnt)
                    self._watch(learnt[0], learnt)
                    self._watch(learnt[1], learnt)
                    self.enqueue(learnt[0], learnt)
                self.var_inc *= 1.0 / 0.95
                continue
            if len(self.trail) == self.nvars:
                model = {v: self.assign[v] for v in range(1, self.nvars + 1)}
                return SAT, model
            if since_restart >= limit:
                restarts += 1
                since_restart = 0
                limit = _RESTART_BASE * _luby(restarts)
                self.backtrack(0)
                continue
            self.decide()


def solve_cnf(num_vars, clauses, assumptions=(), conflict_budget=None,
              polarity="zeros", seed=0):
    """Complete decision for a clause set under unit assumptions.

    Returns (SAT, model) with the model total over 1..num_vars,
    (UNSAT, None), or (BUDGET, None) once conflict_budget conflicts
    have been analyzed.
    """
    solver = _Solver(num_vars, polarity, seed)
    for clause in clauses:
        solver.add_clause(clause)
    for a in assumptions:
        solver.add_clause([a])
    return solver.search(conflict_budget)


def sat_witness(cnf, out_lit, policy, indices, var_map, conflict_budget=None,
                seed=0):
    """A satisfying environment over the AIG variable indices, or None.

    Solves cnf plus the output literal, maps the model back through
    var_map, and fills indices the CNF never mentions with the policy
    default.
    """
    kind, model = solve_cnf(cnf.num_vars, cnf.clauses, assumptions=[out_lit],
                            conflict_budget=conflict_budget, polarity=policy,
                            seed=seed)
    if kind is UNSAT:
        return None
    if kind is BUDGET:
        raise SatBudgetExceeded("witness search ran out of conflicts")
    rng = random.Random(seed ^ 0x5EED)
    env = {}
    for i in sorted(set(indices) | set(var_map)):
        cv = var_map.get(i)
        if cv is not None:
            env[i] = model[cv]
        elif policy == "zeros":
            env[i] = False
        elif policy == "ones":
            env[i] = True
        else:
            env[i] = rng.random() < 0.5
    return env
